"""Physical parameters, constants and closed-form helpers.

All energies entering the Hamiltonian are in meV. Zero-field splittings are
in MHz and linewidths in GHz; conversions live here so every module agrees.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

#: Boltzmann constant in meV/K.
K_B = 0.0861733
#: 1 meV expressed in MHz (E/h).
MEV_TO_MHZ = 241798.9242
MEV_TO_GHZ = MEV_TO_MHZ / 1000.0

#: Radiative linewidth for a 6 ns optical lifetime, in GHz.
GAMMA_R_DEFAULT = 1.0 / (2.0 * math.pi * 6e-9) / 1e9

# Rows are |A1>, |Ex>, |Ey> expressed on the (xi, eta, zeta) orbitals.
SYMMETRY_BASIS = np.array(
    [
        [1.0, 1.0, 1.0],
        [-1.0, -1.0, 2.0],
        [1.0, -1.0, 0.0],
    ]
) / np.array([[math.sqrt(3.0)], [math.sqrt(6.0)], [math.sqrt(2.0)]])

CHARACTER_LABELS = ("A1", "Ex", "Ey")


@dataclass(frozen=True)
class CenterParams:
    """Parameters of one silicon-vacancy center.

    Attributes
    ----------
    label : str
        Identifier, e.g. ``"V1"``.
    e_jt : float
        Jahn-Teller energy (meV).
    hbar_omega : float
        Effective phonon quantum (meV).
    delta : float
        Crystal-field splitting between the A1 and E orbitals (meV).
    lambda_par : float
        Axial spin-orbit constant (meV); 0 disables spin-orbit.
    d2_a2, d2_e : float
        Electronic 2D of the 4A2 and 4E configurations (MHz).
    delta_p : float or None
        Polaronic gap (meV), if known in advance.
    gamma_r : float
        Radiative linewidth (GHz).
    linewidth_a : float or None
        Phonon broadening prefactor A (GHz/meV^3).
    gamma_1 : float or None
        Temperature-independent extra broadening (GHz).
    strain_coeffs : tuple of float or None
        ZPL-strain couplings (a_xx, a_yy, a_zz) in eV/strain.
    """

    label: str = "custom"
    e_jt: float = 0.0
    hbar_omega: float = 100.0
    delta: float = 0.0
    lambda_par: float = 0.0
    d2_a2: float = 0.0
    d2_e: float = 0.0
    delta_p: float | None = None
    gamma_r: float = GAMMA_R_DEFAULT
    linewidth_a: float | None = None
    gamma_1: float | None = None
    strain_coeffs: tuple[float, float, float] | None = None

    def __post_init__(self):
        if not math.isfinite(self.e_jt) or self.e_jt < 0:
            raise DomainError(f"e_jt must be >= 0, got {self.e_jt}")
        if not math.isfinite(self.hbar_omega) or self.hbar_omega <= 0:
            raise DomainError(f"hbar_omega must be > 0, got {self.hbar_omega}")
        if not math.isfinite(self.delta):
            raise DomainError("delta must be finite")
        if not math.isfinite(self.lambda_par):
            raise DomainError("lambda_par must be finite")
        if self.gamma_r < 0:
            raise DomainError(f"gamma_r must be >= 0, got {self.gamma_r}")
        if self.delta_p is not None and self.delta_p <= 0:
            raise DomainError(f"delta_p must be > 0, got {self.delta_p}")
        if self.strain_coeffs is not None:
            if len(self.strain_coeffs) != 3:
                raise DomainError("strain_coeffs needs three components")
            object.__setattr__(self, "strain_coeffs", tuple(float(c) for c in self.strain_coeffs))

    @property
    def f_t(self) -> float:
        return vibronic_coupling(self.e_jt, self.hbar_omega)


def vibronic_coupling(e_jt: float, hbar_omega: float) -> float:
    """Linear vibronic coupling F_T = sqrt(3/2 * hbar_omega * E_JT) in meV."""
    if e_jt < 0:
        raise DomainError(f"e_jt must be >= 0, got {e_jt}")
    if hbar_omega <= 0:
        raise DomainError(f"hbar_omega must be > 0, got {hbar_omega}")
    return math.sqrt(1.5 * hbar_omega * e_jt)


def crystal_field_matrix(delta: float) -> np.ndarray:
    """Axial crystal field on the (xi, eta, zeta) orbitals.

    Off-diagonal entries are ``-delta/3``. The A1 combination sits at
    ``-2 delta/3`` and the E pair at ``+delta/3``.
    """
    m = np.full((3, 3), -delta / 3.0)
    np.fill_diagonal(m, 0.0)
    return m


V1 = CenterParams(
    label="V1",
    e_jt=255.4,
    hbar_omega=102.5,
    delta=7.0,
    lambda_par=0.29,
    d2_a2=1664.0,
    d2_e=-1216.0,
    delta_p=4.829,
    linewidth_a=0.37,
    gamma_1=0.065,
    strain_coeffs=(-1.06, -1.41, -7.40),
)

V2 = CenterParams(
    label="V2",
    e_jt=396.5,
    hbar_omega=127.5,
    delta=29.0,
    lambda_par=0.41,
    d2_a2=1569.0,
    d2_e=-1172.0,
    delta_p=22.070,
    linewidth_a=0.26,
    gamma_1=0.082,
    strain_coeffs=(-1.97, -1.89, -6.25),
)

PRESETS: dict[str, CenterParams] = {"V1": V1, "V2": V2}

# Constant shifts applied to computed D(T) curves when overlaying measured data.
ZFS_OFFSETS_MHZ = {"V1": 211.0, "V2": 378.0}


def get_preset(name: str) -> CenterParams:
    try:
        return PRESETS[name.upper()]
    except KeyError:
        raise DomainError(f"unknown center preset {name!r}; known: {sorted(PRESETS)}") from None
