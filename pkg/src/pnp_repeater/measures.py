"""Entropy and entanglement measures of dephased Bell pairs.

A Bell pair stored for time ``t`` keeps fidelity ``(1 + exp(-t/tau_c)) / 2``
with respect to its original Bell state; the rest of the weight sits on the
phase-flipped partner. Both measures below are specific to that rank-two
family.
"""

from __future__ import annotations

import enum
import math


class MeasureKind(enum.Enum):
    ENTANGLEMENT_COST = "ec"
    DISTILLABLE_ENTANGLEMENT = "ed"


def binary_entropy(p: float) -> float:
    """Shannon entropy of a biased coin, in bits."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    q = min(p, 1.0 - p)
    # log1p keeps the (1-q) term accurate when q is tiny
    return (-q * math.log(q) - (1.0 - q) * math.log1p(-q)) / math.log(2.0)


def fidelity_after(t: float, tau_c: float) -> float:
    if not t >= 0:
        raise ValueError(f"storage time must be non-negative, got {t}")
    if not tau_c > 0:
        raise ValueError(f"coherence time must be positive, got {tau_c}")
    if math.isinf(tau_c):
        return 1.0 if math.isfinite(t) else 0.5
    return 0.5 * (1.0 + math.exp(-t / tau_c))


def _check_fidelity(f: float) -> None:
    if not 0.5 <= f <= 1.0:
        raise ValueError(
            f"fidelity must lie in [1/2, 1] (relabel the majority Bell component first), got {f}"
        )


def entanglement_cost(f: float) -> float:
    """Entanglement cost ``H(1/2 + sqrt(f(1-f)))`` in ebits per pair.

    Evaluated through ``d = 2f - 1`` so that pairs dephased for many
    coherence times (f just above 1/2) keep their relative precision.
    """
    _check_fidelity(f)
    d = 2.0 * f - 1.0
    s = math.sqrt(1.0 - d * d)
    # 1/2 - sqrt(f(1-f)) without cancellation
    x = 0.5 * d * d / (1.0 + s)
    return binary_entropy(x)


def distillable_entanglement(f: float) -> float:
    """Hashing yield ``1 - H(f)`` in ebits per pair, clamped at 0."""
    _check_fidelity(f)
    u = 2.0 * f - 1.0
    if u < 0.5:
        # 1 - H((1+u)/2) = [2u atanh(u) + log(1-u^2)] / (2 ln 2); the direct
        # form cancels to nothing once u^2 drops below machine epsilon
        val = (2.0 * u * math.atanh(u) + math.log1p(-u * u)) / (2.0 * math.log(2.0))
    else:
        val = 1.0 - binary_entropy(f)
    return max(0.0, val)


def measure_value(kind: MeasureKind, f: float) -> float:
    if kind is MeasureKind.ENTANGLEMENT_COST:
        return entanglement_cost(f)
    if kind is MeasureKind.DISTILLABLE_ENTANGLEMENT:
        return distillable_entanglement(f)
    raise ValueError(f"unknown measure {kind!r}")
