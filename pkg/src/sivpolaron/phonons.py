"""Truncated occupation-number basis of three degenerate t2 modes."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

MODES = ("xi", "eta", "zeta")


@dataclass(frozen=True)
class PhononBasis:
    """All occupations (n_xi, n_eta, n_zeta) with total <= ``n_max``.

    States are ordered by total occupation, then lexicographically.
    """

    n_max: int
    states: tuple[tuple[int, int, int], ...]
    index: dict = field(compare=False, repr=False)

    def __len__(self):
        return len(self.states)

    @property
    def totals(self) -> np.ndarray:
        return np.array([sum(s) for s in self.states], dtype=int)


def enumerate_basis(n_max: int) -> PhononBasis:
    if n_max < 0 or int(n_max) != n_max:
        raise DomainError(f"n_max must be a non-negative integer, got {n_max}")
    n_max = int(n_max)
    states = []
    for total in range(n_max + 1):
        shell = [s for s in itertools.product(range(total + 1), repeat=3) if sum(s) == total]
        states.extend(sorted(shell))
    states = tuple(states)
    return PhononBasis(n_max, states, {s: i for i, s in enumerate(states)})


def basis_size(n_max: int) -> int:
    return math.comb(n_max + 3, 3)


def _mode_index(mode) -> int:
    if isinstance(mode, str):
        try:
            return MODES.index(mode)
        except ValueError:
            raise DomainError(f"mode must be one of {MODES}, got {mode!r}") from None
    if mode not in (0, 1, 2):
        raise DomainError(f"mode index must be 0, 1 or 2, got {mode!r}")
    return int(mode)


def lowering_operator(basis: PhononBasis, mode) -> np.ndarray:
    """Annihilation operator ``a`` of one mode inside the truncated basis."""
    k = _mode_index(mode)
    a = np.zeros((len(basis), len(basis)))
    for col, state in enumerate(basis.states):
        n = state[k]
        if n == 0:
            continue
        lowered = list(state)
        lowered[k] -= 1
        a[basis.index[tuple(lowered)], col] = math.sqrt(n)
    return a


def q_operator(basis: PhononBasis, mode) -> np.ndarray:
    """Dimensionless coordinate Q = (a + a^dagger)/sqrt(2) of one mode.

    Matrix elements coupling to states beyond ``n_max`` are dropped.
    """
    a = lowering_operator(basis, mode)
    return (a + a.T) / math.sqrt(2.0)


def number_operator(basis: PhononBasis) -> np.ndarray:
    """Total phonon number, zero-point energy omitted."""
    return np.diag(basis.totals.astype(float))
