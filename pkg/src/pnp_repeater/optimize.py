"""Choice of nesting level and informed depth, and distance scaling of the optimum."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .core import ChannelModel, RepeaterConfig
from .measures import MeasureKind
from .rates import RateResult, RateVariant, normalized_rate

DEFAULT_N_MAX = 24


@dataclass(frozen=True)
class Physics:
    """Hardware parameters that do not depend on the chain layout."""

    p_m: float
    tau_c: float = math.inf
    channel: ChannelModel = field(default_factory=ChannelModel)

    def config(self, L: float, n: int, m: int, N: int = 1) -> RepeaterConfig:
        return RepeaterConfig(L=L, n=n, m=m, N=N, p_m=self.p_m, tau_c=self.tau_c, channel=self.channel)


@dataclass(frozen=True)
class OptimizationResult:
    n_opt: int
    m_opt: int
    r_opt: float
    l0_opt: float
    best: RateResult
    table: List[Tuple[int, int, float]]


def optimize(
    L: float,
    physics: Physics,
    variant: RateVariant = RateVariant.WITH_PURIFICATION,
    measure: MeasureKind = MeasureKind.ENTANGLEMENT_COST,
    n_max: int = DEFAULT_N_MAX,
    n_values: Sequence[int] | None = None,
) -> OptimizationResult:
    """Exhaustive search over ``1 <= m <= n <= n_max``.

    Ties go to the smaller n, then the smaller m (cheaper hardware).
    ``n_values`` restricts the search to the given nesting levels, which is
    how a fixed-n, optimized-m curve is produced.
    """
    if not L > 0:
        raise ValueError(f"distance must be positive, got {L}")
    ns = list(range(1, n_max + 1)) if n_values is None else sorted(set(int(n) for n in n_values))
    if not ns or ns[0] < 1:
        raise ValueError("search grid is empty; need n_max >= 1 and n >= 1")
    table = []
    best = None
    best_nm = None
    for n in ns:
        for m in range(1, n + 1):
            res = normalized_rate(physics.config(L, n, m), variant, measure)
            table.append((n, m, res.r))
            if best is None or res.r > best.r:
                best, best_nm = res, (n, m)
    n_opt, m_opt = best_nm
    return OptimizationResult(
        n_opt=n_opt, m_opt=m_opt, r_opt=best.r, l0_opt=L / 2**n_opt, best=best, table=table
    )


def _check_pm(p_m: float) -> None:
    if not 0 < p_m < 1:
        raise ValueError(f"asymptotic optimum needs 0 < P_M < 1, got {p_m}")


def asymptotic_l0_opt(p_m: float, alpha: float) -> float:
    """Large-distance optimal elementary link length, ``2 ln(1/P_M) / alpha``."""
    _check_pm(p_m)
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    return 2 * math.log(1 / p_m) / alpha


def asymptotic_m_opt(L: float, p_m: float, tau_c: float, c: float, alpha: float) -> float:
    """``log2`` of ``alpha * sqrt(2 L c tau_c / ln(1/P_M))``; round to get m."""
    _check_pm(p_m)
    for name, v in (("L", L), ("tau_c", tau_c), ("c", c), ("alpha", alpha)):
        if not (v > 0 and math.isfinite(v)):
            raise ValueError(f"{name} must be positive and finite, got {v}")
    return math.log2(alpha * math.sqrt(2 * L * c * tau_c / math.log(1 / p_m)))


def predicted_sqrt_slope(p_m: float, tau_c: float, c: float) -> float:
    """Decay constant of ``ln R_opt`` against ``sqrt(L)`` in the short-memory limit."""
    _check_pm(p_m)
    return 2 * math.sqrt(math.log(1 / p_m) / (c * tau_c))


@dataclass(frozen=True)
class ScalingFit:
    slope: float
    intercept: float
    predicted_slope: float
    relative_error: float
    r_squared: float
    L_values: np.ndarray
    rates: np.ndarray


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    intercept: float
    r_squared: float
    L_values: np.ndarray
    rates: np.ndarray


def _linfit(x: np.ndarray, y: np.ndarray) -> Tuple[float, float, float]:
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - np.sum(resid**2) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), float(r2)


def _optimal_rates(L_values, physics, variant, measure, n_max) -> Tuple[np.ndarray, np.ndarray]:
    L = np.asarray(L_values, dtype=float)
    if L.ndim != 1 or len(L) < 6:
        raise ValueError("scaling fits need at least 6 distance samples")
    if np.any(L <= 0):
        raise ValueError("distances must be positive")
    rates = np.array([optimize(x, physics, variant, measure, n_max).r_opt for x in L])
    if np.any(rates <= 0):
        raise ValueError("optimal rate underflowed to zero; shrink the distance range")
    return L, rates


def scaling_fit(
    physics: Physics,
    variant: RateVariant = RateVariant.WITH_PURIFICATION,
    measure: MeasureKind = MeasureKind.ENTANGLEMENT_COST,
    L_values: Sequence[float] = (),
    n_max: int = DEFAULT_N_MAX,
    enforce_regime: bool = True,
) -> ScalingFit:
    """Least-squares fit of ``ln R_opt = intercept - slope * sqrt(L)``.

    The predicted slope only holds once the link delay dwarfs the coherence
    time, so by default the largest distance must satisfy
    ``L / c >= 20 tau_c``.
    """
    c = physics.channel.c
    if enforce_regime:
        if not math.isfinite(physics.tau_c) or max(L_values, default=0.0) / c < 20 * physics.tau_c:
            raise ValueError(
                f"distance range does not reach L/c >= 20 tau_c "
                f"(max L/c = {max(L_values, default=0.0) / c:.3g} s, tau_c = {physics.tau_c:.3g} s)"
            )
    L, rates = _optimal_rates(L_values, physics, variant, measure, n_max)
    slope, intercept, r2 = _linfit(-np.sqrt(L), np.log(rates))
    if 0 < physics.p_m < 1 and math.isfinite(physics.tau_c):
        pred = predicted_sqrt_slope(physics.p_m, physics.tau_c, c)
        rel = abs(slope - pred) / pred
    else:
        pred, rel = 0.0, math.inf
    return ScalingFit(
        slope=slope, intercept=intercept, predicted_slope=pred, relative_error=rel,
        r_squared=r2, L_values=L, rates=rates,
    )


def power_law_fit(
    physics: Physics,
    variant: RateVariant = RateVariant.WITH_PURIFICATION,
    measure: MeasureKind = MeasureKind.ENTANGLEMENT_COST,
    L_values: Sequence[float] = (),
    n_max: int = DEFAULT_N_MAX,
) -> PowerLawFit:
    """Fit ``ln R_opt`` linearly in ``ln L`` (polynomial scaling regime)."""
    L, rates = _optimal_rates(L_values, physics, variant, measure, n_max)
    slope, intercept, r2 = _linfit(np.log(L), np.log(rates))
    return PowerLawFit(exponent=slope, intercept=intercept, r_squared=r2, L_values=L, rates=rates)
