"""Bell-diagonal two-qubit states under dephasing and entanglement swapping.

Bell states are labelled by the Pauli error that maps psi+ onto them when
applied to the second qubit. With the error written as two bits
(bit flip, phase flip), the index ``2*x + z`` gives

    0: psi+  (no error)
    1: psi-  (Z)
    2: phi+  (X)
    3: phi-  (XZ)

Under this labelling the Pauli errors form the Klein four-group and index
composition is XOR, which is all a swap with Pauli feed-forward does to the
weights. ``oracle_swap`` recomputes the same thing with explicit 16x16
density matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measures import fidelity_after

_NORM_TOL = 1e-12

BELL_LABELS = ("psi+", "psi-", "phi+", "phi-")


@dataclass(frozen=True)
class BellDiagonalState:
    w_psi_plus: float
    w_psi_minus: float
    w_phi_plus: float
    w_phi_minus: float

    def __post_init__(self):
        w = self.weights
        if np.any(w < -_NORM_TOL):
            raise ValueError(f"Bell weights must be non-negative, got {w}")
        if abs(w.sum() - 1.0) > _NORM_TOL:
            raise ValueError(f"Bell weights must sum to 1, got sum {w.sum()!r}")

    @classmethod
    def from_weights(cls, weights) -> "BellDiagonalState":
        w = np.asarray(weights, dtype=float)
        if w.shape != (4,):
            raise ValueError(f"expected 4 Bell weights, got shape {w.shape}")
        return cls(*(float(x) for x in w))

    @classmethod
    def pure(cls, label: str = "psi+") -> "BellDiagonalState":
        w = np.zeros(4)
        w[BELL_LABELS.index(label)] = 1.0
        return cls.from_weights(w)

    @classmethod
    def dephased(cls, t: float, tau_c: float) -> "BellDiagonalState":
        """psi+ after both halves dephased for ``t``: weights (p(t), 1-p(t), 0, 0)."""
        p = fidelity_after(t, tau_c)
        return cls(p, 1.0 - p, 0.0, 0.0)

    @property
    def weights(self) -> np.ndarray:
        return np.array([self.w_psi_plus, self.w_psi_minus, self.w_phi_plus, self.w_phi_minus])

    def fidelity(self) -> float:
        return self.w_psi_plus


PSI_PLUS = BellDiagonalState(1.0, 0.0, 0.0, 0.0)


def dephase(state: BellDiagonalState, t: float, tau_c: float) -> BellDiagonalState:
    """Dephase both qubits of a stored pair for time ``t``.

    A Z error on either qubit toggles the phase bit, so psi+/psi- and
    phi+/phi- mix with weight ``p(t)``.
    """
    p = fidelity_after(t, tau_c)
    a, b, c, d = state.weights
    return BellDiagonalState(
        p * a + (1.0 - p) * b,
        (1.0 - p) * a + p * b,
        p * c + (1.0 - p) * d,
        (1.0 - p) * c + p * d,
    )


def swap(left: BellDiagonalState, right: BellDiagonalState) -> BellDiagonalState:
    """Bell-diagonal state of the outer qubits after swapping ``left`` and ``right``.

    The inner qubits are measured in the Bell basis and the outcome-dependent
    Pauli correction is applied, so two psi+ pairs give psi+.
    """
    wl, wr = left.weights, right.weights
    out = np.zeros(4)
    for a in range(4):
        for b in range(4):
            out[a ^ b] += wl[a] * wr[b]
    return BellDiagonalState.from_weights(out)


def purification_fidelity_cap(f_pur: float, t: float, tau_c: float) -> float:
    """Fidelity left after a purified pair of fidelity ``f_pur`` waits ``t``.

    This is the best case of a two-way scheme whose final local operation
    commutes with dephasing; it never exceeds ``fidelity_after(t, tau_c)``.
    """
    if not 0.0 <= f_pur <= 1.0:
        raise ValueError(f"fidelity must lie in [0, 1], got {f_pur}")
    p = fidelity_after(t, tau_c)
    return p * f_pur + (1.0 - p) * (1.0 - f_pur)


# ---------------------------------------------------------------------------
# dense-matrix oracle

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_PAULIS = (_I2, _X, _Z, _X @ _Z)


def _bell_vectors() -> np.ndarray:
    s = 1 / math.sqrt(2)
    # rows in BELL_LABELS order, computational basis |00>,|01>,|10>,|11>
    return np.array(
        [
            [0, s, s, 0],
            [0, s, -s, 0],
            [s, 0, 0, s],
            [s, 0, 0, -s],
        ],
        dtype=complex,
    )


_BELL = _bell_vectors()


class DenseTwoQubitState:
    """Explicit 4x4 density matrix; used only to cross-check the weight algebra."""

    def __init__(self, rho):
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got {rho.shape}")
        if not np.allclose(rho, rho.conj().T, atol=1e-12):
            raise ValueError("density matrix must be Hermitian")
        if abs(np.trace(rho).real - 1.0) > 1e-12:
            raise ValueError("density matrix must have unit trace")
        if np.linalg.eigvalsh(rho).min() < -1e-10:
            raise ValueError("density matrix must be positive semidefinite")
        self.rho = rho

    @classmethod
    def from_bell_diagonal(cls, state: BellDiagonalState) -> "DenseTwoQubitState":
        rho = sum(w * np.outer(v, v.conj()) for w, v in zip(state.weights, _BELL))
        return cls(rho)

    def bell_weights(self) -> np.ndarray:
        return np.real(np.einsum("ki,ij,kj->k", _BELL.conj(), self.rho, _BELL))

    def to_bell_diagonal(self) -> BellDiagonalState:
        w = self.bell_weights()
        w[np.abs(w) < 1e-15] = 0.0
        return BellDiagonalState.from_weights(w)

    def dephase(self, t: float, tau_c: float) -> "DenseTwoQubitState":
        """Apply the single-qubit phase-flip channel with p(t/2) to each qubit."""
        q = fidelity_after(t / 2, tau_c) if t > 0 else 1.0
        rho = self.rho
        for zz in (np.kron(_Z, _I2), np.kron(_I2, _Z)):
            rho = q * rho + (1 - q) * zz @ rho @ zz
        return DenseTwoQubitState(rho)


def _ideal_corrections() -> list:
    """For each Bell outcome on the inner pair, the Pauli on D restoring psi+.

    Found by running the ideal psi+ x psi+ swap for each outcome and picking
    the Pauli that maps the post-measurement outer state back onto psi+.
    """
    rho_in = np.kron(
        np.outer(_BELL[0], _BELL[0].conj()), np.outer(_BELL[0], _BELL[0].conj())
    )
    fixes = []
    for k in range(4):
        post = _project_inner(rho_in, k)
        post /= np.trace(post)
        for pauli in _PAULIS:
            u = np.kron(_I2, pauli)
            fixed = u @ post @ u.conj().T
            if abs(np.real(_BELL[0].conj() @ fixed @ _BELL[0]) - 1.0) < 1e-12:
                fixes.append(pauli)
                break
        else:  # pragma: no cover
            raise RuntimeError(f"no Pauli correction found for outcome {k}")
    return fixes


def _project_inner(rho4: np.ndarray, k: int) -> np.ndarray:
    """Unnormalised AD state after projecting qubits B, C (order A,B,C,D) onto Bell state k."""
    r = rho4.reshape([2] * 8)  # A B C D ; A' B' C' D'
    bk = _BELL[k].reshape(2, 2)
    # <bk|_BC rho |bk>_BC
    return np.einsum("bc,abcdefgh,fg->adeh", bk.conj(), r, bk).reshape(4, 4)


_CORRECTIONS = None


def oracle_swap(left: BellDiagonalState, right: BellDiagonalState) -> BellDiagonalState:
    """Swap computed on the full four-qubit density matrix."""
    global _CORRECTIONS
    if _CORRECTIONS is None:
        _CORRECTIONS = _ideal_corrections()
    rho4 = np.kron(
        DenseTwoQubitState.from_bell_diagonal(left).rho,
        DenseTwoQubitState.from_bell_diagonal(right).rho,
    )
    out = np.zeros((4, 4), dtype=complex)
    for k in range(4):
        u = np.kron(_I2, _CORRECTIONS[k])
        out += u @ _project_inner(rho4, k) @ u.conj().T
    return DenseTwoQubitState(out).to_bell_diagonal()
