"""Rate analysis and simulation of nested quantum-repeater chains with dephasing memories."""

from .bellstate import (
    PSI_PLUS,
    BellDiagonalState,
    dephase,
    oracle_swap,
    purification_fidelity_cap,
    swap,
)
from .core import KM, MS, ChannelModel, RepeaterConfig, TimingModel, success_probability, timing
from .measures import (
    MeasureKind,
    binary_entropy,
    distillable_entanglement,
    entanglement_cost,
    fidelity_after,
)
from .optimize import (
    OptimizationResult,
    Physics,
    ScalingFit,
    asymptotic_l0_opt,
    asymptotic_m_opt,
    optimize,
    power_law_fit,
    scaling_fit,
)
from .rates import (
    RateResult,
    RateVariant,
    decay_time_nopur,
    decay_time_pur,
    normalized_rate,
    pairs_per_cycle,
    q_rate,
)
from .sim import SimConfig, SimStats, compare_to_analytic, run

__version__ = "0.1.0"
