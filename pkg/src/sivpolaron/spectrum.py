"""Diagonalization, character projection and spin-orbit fine structure."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DomainError, NumericalError
from .hamiltonian import SPIN_PROJECTIONS, HamiltonianMatrix, assemble, assemble_with_spin_orbit
from .params import MEV_TO_GHZ, MEV_TO_MHZ, SYMMETRY_BASIS, CenterParams
from .phonons import enumerate_basis

DEFAULT_DEGENERACY_TOL = 1e-6  # meV
RESIDUAL_TOL = 1e-10


class Eigenpairs(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray


def diagonalize(h, residual_tol: float = RESIDUAL_TOL) -> Eigenpairs:
    """Full eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises
    ------
    NumericalError
        If LAPACK fails or any eigenpair residual exceeds
        ``residual_tol * ||H||_F``.
    """
    m = h.matrix if isinstance(h, HamiltonianMatrix) else np.asarray(h)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericalError("matrix contains non-finite entries")
    try:
        values, vectors = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver did not converge: {exc}") from exc
    norm = np.linalg.norm(m)
    residual = np.linalg.norm(m @ vectors - vectors * values, axis=0).max() if len(values) else 0.0
    if residual > residual_tol * max(norm, 1.0):
        raise NumericalError(f"eigenpair residual {residual:.3e} exceeds tolerance")
    return Eigenpairs(values, vectors)


@dataclass(frozen=True)
class PolaronicState:
    energy_rel: float
    c_a1: float
    c_ex: float
    c_ey: float
    multiplet_id: int
    multiplicity: int
    converged: bool = True

    @property
    def c_e(self) -> float:
        return self.c_ex + self.c_ey


@dataclass
class Spectrum:
    """Polaronic states sorted by energy, grouped into degenerate multiplets."""

    states: list[PolaronicState]
    params_used: CenterParams
    n_max_used: int
    degeneracy_tol: float
    ground_energy: float = 0.0
    characters: np.ndarray = field(repr=False, default=None)

    def __len__(self):
        return len(self.states)

    @property
    def energies(self) -> np.ndarray:
        return np.array([s.energy_rel for s in self.states])

    def multiplets(self) -> list[list[PolaronicState]]:
        groups: list[list[PolaronicState]] = []
        for s in self.states:
            if groups and groups[-1][0].multiplet_id == s.multiplet_id:
                groups[-1].append(s)
            else:
                groups.append([s])
        return groups

    def multiplet_energies(self) -> np.ndarray:
        return np.array([np.mean([s.energy_rel for s in g]) for g in self.multiplets()])


def group_degenerate(values, tol: float) -> list[np.ndarray]:
    """Split sorted ``values`` into runs whose neighbours differ by <= tol."""
    values = np.asarray(values)
    if len(values) == 0:
        return []
    breaks = np.nonzero(np.diff(values) > tol)[0] + 1
    return np.split(np.arange(len(values)), breaks)


def character_weights(h: HamiltonianMatrix, vectors: np.ndarray) -> np.ndarray:
    """A1, Ex, Ey weights of each eigenvector, shape (n_vectors, 3)."""
    blocks = vectors.reshape(3, -1, vectors.shape[-1])
    projected = np.einsum("gi,ink->gnk", SYMMETRY_BASIS, blocks)
    return (np.abs(projected) ** 2).sum(axis=1).T


def project_characters(
    h: HamiltonianMatrix,
    eigenpairs: Eigenpairs,
    degeneracy_tol: float = DEFAULT_DEGENERACY_TOL,
    converged_below: float | None = None,
) -> Spectrum:
    """Electronic character of every eigenstate.

    Energies are reported above the ground state. States above
    ``converged_below`` (meV, default ``n_max * hbar_omega / 2``) are marked
    unconverged.
    """
    if degeneracy_tol <= 0:
        raise DomainError("degeneracy_tol must be positive")
    values, vectors = eigenpairs
    chars = character_weights(h, vectors)
    rel = values - values[0]
    if converged_below is None:
        converged_below = h.basis.n_max * h.params.hbar_omega / 2.0
    states = []
    for mid, idx in enumerate(group_degenerate(values, degeneracy_tol)):
        for k in idx:
            states.append(
                PolaronicState(
                    energy_rel=float(rel[k]),
                    c_a1=float(chars[k, 0]),
                    c_ex=float(chars[k, 1]),
                    c_ey=float(chars[k, 2]),
                    multiplet_id=mid,
                    multiplicity=len(idx),
                    converged=bool(rel[k] <= converged_below),
                )
            )
    return Spectrum(states, h.params, h.basis.n_max, degeneracy_tol, float(values[0]), chars)


def polaronic_spectrum(
    params: CenterParams, n_max: int = 8, degeneracy_tol: float = DEFAULT_DEGENERACY_TOL
) -> Spectrum:
    h = assemble(params, enumerate_basis(n_max))
    return project_characters(h, diagonalize(h), degeneracy_tol)


def polaronic_gap(spectrum: Spectrum) -> float:
    """Energy of the first excited multiplet above the ground multiplet (meV)."""
    energies = spectrum.multiplet_energies()
    if len(energies) < 2:
        raise DomainError("polaronic gap needs at least two multiplets")
    return float(energies[1] - energies[0])


@dataclass
class SpinOrbitBranch:
    """Kramers-doublet fine structure of one vibronic branch.

    Energies in meV relative to the lowest spin-orbit level. ``abs_ms`` holds
    the |m_s| label of each doublet, or NaN where the spin character is mixed.
    """

    branch_id: int
    doublet_energies: np.ndarray
    abs_ms: np.ndarray
    ambiguous: bool

    @property
    def n_states(self) -> int:
        return 2 * len(self.doublet_energies)

    @property
    def energy(self) -> float:
        return float(np.mean(self.doublet_energies))

    @property
    def delta(self) -> float | None:
        """Effective Delta (meV) of an orbital-doublet branch: span / 6."""
        if len(self.doublet_energies) != 4:
            return None
        return float(np.ptp(self.doublet_energies)) / 6.0

    @property
    def delta_ghz(self) -> float | None:
        d = self.delta
        return None if d is None else d * MEV_TO_GHZ

    @property
    def d_so(self) -> float | None:
        """(E(|m_s|=3/2) - E(|m_s|=1/2)) / 2 in meV, averaged over doublets."""
        if self.ambiguous:
            return None
        hi = self.doublet_energies[np.isclose(self.abs_ms, 1.5)]
        lo = self.doublet_energies[np.isclose(self.abs_ms, 0.5)]
        if len(hi) == 0 or len(lo) == 0:
            return None
        return float(hi.mean() - lo.mean()) / 2.0

    @property
    def d_so_mhz(self) -> float | None:
        d = self.d_so
        return None if d is None else d * MEV_TO_MHZ


def so_doublet_structure(
    h_so: HamiltonianMatrix,
    eigenpairs: Eigenpairs,
    branch_gap: float = 1.0,
    kramers_tol: float = 1e-8,
    ms_tol: float = 0.1,
    n_branches: int | None = None,
) -> list[SpinOrbitBranch]:
    """Classify spin-orbit levels into branches and Kramers doublets.

    Levels closer than ``branch_gap`` (meV) belong to the same vibronic
    branch. Inside a degenerate cluster |m_s| comes from diagonalizing S_z^2
    in the cluster, so doublets are labelled even when exactly degenerate.
    """
    if not h_so.has_spin:
        raise DomainError("spin-orbit structure needs a Hamiltonian with spin")
    values, vectors = eigenpairs
    rel = values - values[0]
    sz2 = np.tile(SPIN_PROJECTIONS**2, h_so.dim // 4)
    branches = []
    for bid, bidx in enumerate(group_degenerate(rel, branch_gap)):
        if n_branches is not None and bid >= n_branches:
            break
        energies, labels, ambiguous = [], [], False
        for cidx in group_degenerate(rel[bidx], kramers_tol):
            cidx = bidx[cidx]
            if len(cidx) % 2:
                raise NumericalError(
                    f"odd degeneracy {len(cidx)} at {rel[cidx[0]]:.6g} meV; Kramers pairing broken"
                )
            p = vectors[:, cidx]
            ms2 = np.linalg.eigvalsh(p.conj().T @ (sz2[:, None] * p))
            for pair in ms2.reshape(-1, 2):
                ms = float(np.sqrt(max(pair.mean(), 0.0)))
                if abs(pair[0] - pair[1]) > 0.2 or min(abs(ms - 0.5), abs(ms - 1.5)) > ms_tol:
                    ambiguous = True
                    ms = np.nan
                energies.append(float(rel[cidx].mean()))
                labels.append(round(ms * 2) / 2 if np.isfinite(ms) else np.nan)
        branches.append(SpinOrbitBranch(bid, np.array(energies), np.array(labels), ambiguous))
    return branches


def spin_orbit_structure(params: CenterParams, n_max: int = 8, **kwargs) -> list[SpinOrbitBranch]:
    h = assemble_with_spin_orbit(params, enumerate_basis(n_max))
    return so_doublet_structure(h, diagonalize(h), **kwargs)
