"""
Saturation with long-lived memories
===================================

Once the coherence time far exceeds the link delay, the optimised rate stops
improving and settles at the best fully informed raw rate over n.
"""

import numpy as np

from pnp_repeater import KM, MS, Physics, optimize, q_rate

L = 1000 * KM
phys_inf = Physics(0.75)
cap = max(q_rate(phys_inf.config(L, n, n)) for n in range(1, 25))
print(f"ceiling max_n Q_n^(n) = {cap:.4g} pairs/s/memory\n")

# %%
print(" tau_c [ms]   n_opt m_opt   R_opt / ceiling")
for tau_c in np.geomspace(0.1 * MS, 100.0, 13):
    res = optimize(L, Physics(0.75, tau_c))
    print(f"{tau_c / MS:11.4g}   {res.n_opt:5d} {res.m_opt:5d}   {res.r_opt / cap:.4f}")
