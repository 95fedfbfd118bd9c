"""Topology and timing primitives for a nested repeater chain.

All quantities are SI: lengths in meters, times in seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

KM = 1e3
MS = 1e-3


@dataclass(frozen=True)
class ChannelModel:
    """Fiber channel: signal speed, attenuation and heralding success.

    The heralded success probability over one elementary link follows
    ``ps_prefactor * 10 ** (-ps_exponent_per_m * l0)``. ``alpha`` is kept as
    an independent parameter; it only enters the closed-form asymptotics.
    """

    c: float = 2e8
    alpha: float = 1 / (50 * KM)
    ps_prefactor: float = 0.2
    ps_exponent_per_m: float = 0.01 / KM
    ps_override: Optional[float] = None

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"signal speed must be positive, got {self.c}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not 0 < self.ps_prefactor <= 1:
            raise ValueError(f"ps_prefactor must lie in (0, 1], got {self.ps_prefactor}")
        if self.ps_exponent_per_m < 0:
            raise ValueError("ps_exponent_per_m must be non-negative")
        if self.ps_override is not None and not 0 < self.ps_override <= 1:
            raise ValueError(f"ps_override must lie in (0, 1], got {self.ps_override}")


def success_probability(channel: ChannelModel, l0: float) -> float:
    """Probability that one entanglement-distribution attempt over ``l0`` succeeds."""
    if not l0 > 0:
        raise ValueError(f"link length must be positive, got {l0}")
    if channel.ps_override is not None:
        return channel.ps_override
    return channel.ps_prefactor * 10.0 ** (-channel.ps_exponent_per_m * l0)


@dataclass(frozen=True)
class RepeaterConfig:
    """A chain of ``2**n`` elementary links spanning ``L`` meters.

    Stations at levels ``1..m`` perform informed Bell-state measurements,
    levels above ``m`` measure blindly. For ``n == 0`` there are no stations
    and ``m`` must be 1.
    """

    L: float
    n: int
    m: int
    N: int = 1
    p_m: float = 1.0
    tau_c: float = math.inf
    channel: ChannelModel = field(default_factory=ChannelModel)

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError(f"distance must be positive, got {self.L}")
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"nesting level must be a non-negative integer, got {self.n}")
        if int(self.m) != self.m or not 1 <= self.m <= max(self.n, 1):
            raise ValueError(f"m must satisfy 1 <= m <= max(n, 1); got m={self.m}, n={self.n}")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"memories per bank must be a positive integer, got {self.N}")
        if not 0 < self.p_m <= 1:
            raise ValueError(f"BSM success probability must lie in (0, 1], got {self.p_m}")
        if not self.tau_c > 0:
            raise ValueError(f"coherence time must be positive, got {self.tau_c}")

    @property
    def l0(self) -> float:
        return self.L / 2**self.n

    @property
    def total_memories(self) -> int:
        return self.N * 2 ** (self.n + 1)

    @property
    def p_s(self) -> float:
        return success_probability(self.channel, self.l0)


@dataclass(frozen=True)
class TimingModel:
    """Classical-communication delays of the chain.

    ``t_ed`` is the heralding period of one elementary link; ``T(k)`` is the
    delay for a level-k station's result to reach the next level.
    """

    t_ed: float

    def __post_init__(self):
        if not self.t_ed >= 0:
            raise ValueError("t_ed must be non-negative")

    def T(self, k: int) -> float:
        if k < 1:
            raise ValueError(f"T_k is defined for k >= 1, got {k}")
        return 2.0 ** (k - 1) * self.t_ed


def timing(config: RepeaterConfig) -> TimingModel:
    return TimingModel(t_ed=config.l0 / config.channel.c)
