"""Steady-state entanglement rate per employed memory.

The raw pair rate ``q_rate`` assumes every memory re-attempts each cycle
(large-N, optimistic). Dephasing enters through an effective storage time
that depends on how purification is used; the pair rate is then weighted by
an entanglement measure of the dephased pair.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .core import RepeaterConfig, timing
from .measures import MeasureKind, fidelity_after, measure_value


class RateVariant(enum.Enum):
    IDEAL = "ideal"
    NO_PURIFICATION = "nopur"
    WITH_PURIFICATION = "pur"
    ONE_WAY_HASHING = "hashing"


@dataclass(frozen=True)
class RateResult:
    q: float
    effective_decay_time: float
    measure_value: float
    r: float
    variant: RateVariant
    measure: MeasureKind


def bsm_exponent(n: int, m: int) -> int:
    """Number of BSM successes needed for one end-to-end pair."""
    if n == 0:
        return 0
    return 2 ** (n - m + 1) + m - 2


def _check_levels(config: RepeaterConfig) -> None:
    if config.n < 1:
        raise ValueError("decay times are defined for nesting level n >= 1")


def pairs_per_cycle(config: RepeaterConfig) -> float:
    """Expected end-to-end pairs created per cycle on the whole chain."""
    return config.N * config.p_s * config.p_m ** bsm_exponent(config.n, config.m)


def q_rate(config: RepeaterConfig) -> float:
    """Pairs per second per memory, ignoring dephasing."""
    c = config.channel.c
    return config.p_s * config.p_m ** bsm_exponent(config.n, config.m) * c / (2 * config.L)


def decay_time_nopur(config: RepeaterConfig) -> float:
    """Storage time accumulated by an end-to-end pair when nothing is purified.

    Equals ``T_(n+1) + (m-1) T_n``.
    """
    _check_levels(config)
    tm = timing(config)
    n, m = config.n, config.m
    return tm.T(n + 1) + (m - 1) * tm.T(n)


def decay_time_pur(config: RepeaterConfig) -> float:
    """Best-case storage time after purifying up to level m: ``max(T_ED, T_(m-1))``."""
    _check_levels(config)
    tm = timing(config)
    if config.m <= 2:
        return tm.t_ed
    return max(tm.t_ed, tm.T(config.m - 1))


def decay_time_hashing(config: RepeaterConfig) -> float:
    """Storage time before one-way hashing at level m.

    Pairs over level m-1 links carry half of the no-purification time of an
    m-level chain, plus half of the wait ``T_m`` at the level-m stations.
    """
    _check_levels(config)
    tm = timing(config)
    m = config.m
    t_mm = tm.T(m + 1) + (m - 1) * tm.T(m)
    return t_mm / 2 + tm.T(m) / 2


def effective_decay_time(config: RepeaterConfig, variant: RateVariant) -> float:
    if variant is RateVariant.IDEAL:
        return 0.0
    if config.n == 0:
        return timing(config).t_ed
    if variant is RateVariant.NO_PURIFICATION:
        return decay_time_nopur(config)
    if variant is RateVariant.WITH_PURIFICATION:
        return decay_time_pur(config)
    if variant is RateVariant.ONE_WAY_HASHING:
        return decay_time_hashing(config)
    raise ValueError(f"unknown rate variant {variant!r}")


def normalized_rate(
    config: RepeaterConfig,
    variant: RateVariant = RateVariant.WITH_PURIFICATION,
    measure: MeasureKind = MeasureKind.ENTANGLEMENT_COST,
) -> RateResult:
    """Entanglement generation rate per employed memory.

    Parameters
    ----------
    config : RepeaterConfig
        Chain and physics parameters.
    variant : RateVariant
        Selects the effective storage time of the delivered pair.
        ``ONE_WAY_HASHING`` always uses the distillable entanglement since
        that is the hashing yield.
    measure : MeasureKind
        Entanglement measure applied to the dephased pair.

    Returns
    -------
    RateResult
        ``r = q * measure_value``, in ebits per second per memory.
    """
    if not isinstance(variant, RateVariant):
        raise ValueError(f"unknown rate variant {variant!r}")
    if not isinstance(measure, MeasureKind):
        raise ValueError(f"unknown measure {measure!r}")
    if variant is RateVariant.ONE_WAY_HASHING:
        measure = MeasureKind.DISTILLABLE_ENTANGLEMENT
    q = q_rate(config)
    t = effective_decay_time(config, variant)
    e = measure_value(measure, fidelity_after(t, config.tau_c))
    return RateResult(
        q=q, effective_decay_time=t, measure_value=e, r=q * e, variant=variant, measure=measure
    )
