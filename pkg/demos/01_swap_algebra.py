"""
Entanglement swapping on Bell-diagonal states
=============================================

A two-qubit Bell-diagonal state is four weights. Swapping two of them is an
XOR convolution of the weight vectors, and a dense 16x16 projection gives
the same answer.
"""

import numpy as np

from pnp_repeater import BellDiagonalState, dephase, oracle_swap, swap

# %%
# Two noisy links, with weights ordered psi+, psi-, phi+, phi-.
left = BellDiagonalState(0.7, 0.1, 0.15, 0.05)
right = BellDiagonalState(0.6, 0.2, 0.1, 0.1)
print("swap       :", np.round(swap(left, right).weights, 6))
print("dense check:", np.round(oracle_swap(left, right).weights, 6))

# %%
# Dephasing only moves weight between psi+ and psi-. After a swap the storage
# times of the two halves simply add up.
tau_c = 1.0
for t in (0.1, 0.5, 2.0):
    rho = BellDiagonalState.dephased(t, tau_c)
    joined = swap(rho, rho)
    print(f"t={t:4}: F(swap) = {joined.fidelity():.6f}   F(2t) = {BellDiagonalState.dephased(2 * t, tau_c).fidelity():.6f}")

# %%
# Dephasing a generic state keeps it normalised.
s = dephase(left, 0.8, tau_c)
print("dephased left:", np.round(s.weights, 6), "sum =", s.weights.sum())
