"""
Normalised rate against nesting level
=====================================

For a 1000 km chain we compute the purified rate per memory, optimised over
the informed depth m, for each nesting level n. The curve has a single peak.
It rises steeply while the elementary links are still lossy and falls slowly
once swap failures dominate.
"""

from pnp_repeater import KM, MS, MeasureKind, Physics, RateVariant, normalized_rate, optimize

L = 1000 * KM
P_M = 0.75

# %%
for tau_c in (1 * MS, 5 * MS, 100 * MS):
    print(f"\ncoherence time {tau_c / MS:g} ms")
    print(" n  m_opt   R [ebit/s/memory]")
    for n in range(1, 9):
        res = optimize(L, Physics(P_M, tau_c), RateVariant.WITH_PURIFICATION, MeasureKind.ENTANGLEMENT_COST,
                       n_values=[n])
        print(f"{n:2d}  {res.m_opt:5d}   {res.r_opt:.4g}")

# %%
# Purification only shortens the effective storage time, so it never hurts.
cfg = Physics(P_M, 5 * MS).config(L, 5, 3)
for v in RateVariant:
    r = normalized_rate(cfg, v, MeasureKind.ENTANGLEMENT_COST)
    print(f"{v.value:8s} decay time {r.effective_decay_time / MS:7.3f} ms   R = {r.r:.4g}")
