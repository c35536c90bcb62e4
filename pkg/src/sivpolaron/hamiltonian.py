"""Assembly of the T x t2 polaronic Hamiltonian.

The product basis is ordered electronic-major, then phonon, then spin::

    index = (orbital * n_phonon + phonon) * n_spin + spin

with orbitals (xi, eta, zeta) and spin projections (3/2, 1/2, -1/2, -3/2).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError
from .params import SYMMETRY_BASIS, CenterParams, crystal_field_matrix
from .phonons import PhononBasis, number_operator, q_operator

MAX_DIM = 50_000

SPIN_PROJECTIONS = np.array([1.5, 0.5, -0.5, -1.5])

# Effective orbital momentum along the trigonal axis, on (A1, Ex, Ey).
_LZ_SYMMETRY = np.array(
    [
        [0, 0, 0],
        [0, 0, -1j],
        [0, 1j, 0],
    ]
)
#: Same operator on the (xi, eta, zeta) orbitals, symmetrized to be exactly Hermitian.
LZ_ORBITAL = SYMMETRY_BASIS.T @ _LZ_SYMMETRY @ SYMMETRY_BASIS
LZ_ORBITAL = (LZ_ORBITAL + LZ_ORBITAL.conj().T) / 2


@dataclass(frozen=True)
class HamiltonianMatrix:
    matrix: np.ndarray
    params: CenterParams
    basis: PhononBasis
    n_spin: int = 1

    n_orbital = 3

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_phonon(self) -> int:
        return len(self.basis)

    @property
    def has_spin(self) -> bool:
        return self.n_spin > 1


def _check_dim(dim, max_dim):
    if dim > max_dim:
        raise DomainError(f"Hamiltonian dimension {dim} exceeds cap {max_dim}")


def coupling_matrix(basis: PhononBasis, f_t: float) -> np.ndarray:
    """Linear vibronic term W on the orbital x phonon space.

    Q_zeta couples (xi, eta), Q_eta couples (xi, zeta), Q_xi couples (eta, zeta).
    """
    w = np.zeros((3 * len(basis),) * 2)
    for (i, j), mode in (((0, 1), "zeta"), ((0, 2), "eta"), ((1, 2), "xi")):
        pair = np.zeros((3, 3))
        pair[i, j] = pair[j, i] = 1.0
        w -= f_t * np.kron(pair, q_operator(basis, mode))
    return w


def assemble(params: CenterParams, basis: PhononBasis, max_dim: int = MAX_DIM) -> HamiltonianMatrix:
    """Spinless polaronic Hamiltonian (meV), real symmetric of size 3*len(basis).

    ``H = hbar_omega * N + W(Q; F_T) + crystal field``, the harmonic
    term measured from the zero-point energy.
    """
    n = len(basis)
    _check_dim(3 * n, max_dim)
    h = params.hbar_omega * np.kron(np.eye(3), number_operator(basis))
    h += coupling_matrix(basis, params.f_t)
    h += np.kron(crystal_field_matrix(params.delta), np.eye(n))
    return HamiltonianMatrix(h, params, basis, 1)


def spin_orbit_operator(n_phonon: int, lambda_par: float) -> np.ndarray:
    """(lambda_par/3) * Lz x 1_phonon x Sz for a spin-3/2 quartet."""
    return (lambda_par / 3.0) * np.kron(
        np.kron(LZ_ORBITAL, np.eye(n_phonon)), np.diag(SPIN_PROJECTIONS)
    )


def assemble_with_spin_orbit(
    params: CenterParams, basis: PhononBasis, max_dim: int = MAX_DIM
) -> HamiltonianMatrix:
    """Polaronic Hamiltonian extended by axial spin-orbit on the spin-3/2 space.

    With no vibronic coupling the 4E multiplet splits into four Kramers
    doublets spaced by ``lambda_par/3``.
    """
    _check_dim(12 * len(basis), max_dim)
    spinless = assemble(params, basis, max_dim)
    h = np.kron(spinless.matrix, np.eye(4)).astype(complex)
    if params.lambda_par != 0.0:
        h += spin_orbit_operator(len(basis), params.lambda_par)
    return HamiltonianMatrix(h, params, basis, 4)


def apes(params: CenterParams, q) -> np.ndarray:
    """Adiabatic potential energies (meV) at classical displacement ``q``.

    ``q`` holds (Q_xi, Q_eta, Q_zeta) in the same dimensionless units as the
    quantum coordinate; returns the three sorted electronic eigenvalues.
    """
    qx, qe, qz = q
    f = params.f_t
    w = -f * np.array([[0.0, qz, qe], [qz, 0.0, qx], [qe, qx, 0.0]])
    elastic = 0.5 * params.hbar_omega * (qx * qx + qe * qe + qz * qz)
    return np.linalg.eigvalsh(w + crystal_field_matrix(params.delta)) + elastic


def trigonal_apes_minimum(params: CenterParams) -> float:
    """Minimum of the lowest sheet along Q_xi = Q_eta = Q_zeta, ignoring the crystal field."""
    bare = CenterParams(e_jt=params.e_jt, hbar_omega=params.hbar_omega)
    if bare.e_jt == 0:
        return 0.0
    q_star = 2.0 * bare.f_t / (3.0 * bare.hbar_omega)
    res = minimize_scalar(
        lambda q: apes(bare, (q, q, q))[0],
        bracket=(0.0, q_star * 0.5, q_star * 3.0),
        tol=1e-12,
    )
    return float(res.fun)
