"""
How the optimal rate falls with distance
========================================

With short memories, ln R_opt falls linearly in sqrt(L), and the slope has a
closed form. With long memories the fall is polynomial, so it is linear in ln L.
"""

import numpy as np

from pnp_repeater import KM, MS, Physics, asymptotic_l0_opt, asymptotic_m_opt, optimize, power_law_fit, scaling_fit

# %%
for p_m in (0.5, 0.75):
    fit = scaling_fit(Physics(p_m, 0.1 * MS), L_values=np.geomspace(2000 * KM, 20000 * KM, 10))
    print(f"P_M={p_m}: fitted slope {fit.slope:.4g}, predicted {fit.predicted_slope:.4g} per sqrt(m), "
          f"error {fit.relative_error:.1%}")

# %%
for p_m in (0.5, 0.75):
    pl = power_law_fit(Physics(p_m, 100 * MS), L_values=np.geomspace(100 * KM, 2000 * KM, 10))
    print(f"P_M={p_m}: R_opt ~ L^{pl.exponent:.3f} (R^2 = {pl.r_squared:.5f})")

# %%
# The grid optimum against the large-distance closed forms.
L, tau_c, alpha = 20000 * KM, 0.1 * MS, 1 / (50 * KM)
for p_m in (0.5, 0.75):
    res = optimize(L, Physics(p_m, tau_c))
    print(f"P_M={p_m}: L0 grid {res.l0_opt / KM:.2f} km vs {asymptotic_l0_opt(p_m, alpha) / KM:.2f} km, "
          f"m grid {res.m_opt} vs {asymptotic_m_opt(L, p_m, tau_c, 2e8, alpha):.2f}")
