"""Experiment-facing quantities derived from a polaronic spectrum."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .params import K_B, CenterParams
from .spectrum import PolaronicState, Spectrum

STRAIN_BOUND = 0.01


@dataclass
class TemperatureCurve:
    temperatures: np.ndarray
    values: np.ndarray
    kind: str
    offset_applied: float = 0.0

    def __post_init__(self):
        self.temperatures = np.asarray(self.temperatures, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if np.any(self.temperatures <= 0):
            raise DomainError("temperatures must be positive")
        if np.any(np.diff(self.temperatures) <= 0):
            raise DomainError("temperatures must be strictly increasing")

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.temperatures.tolist(), self.values.tolist()))


@dataclass(frozen=True)
class StrainTensorDiag:
    eps_xx: float = 0.0
    eps_yy: float = 0.0
    eps_zz: float = 0.0

    def __post_init__(self):
        for name in ("eps_xx", "eps_yy", "eps_zz"):
            if abs(getattr(self, name)) > STRAIN_BOUND:
                raise DomainError(f"{name} outside the linear regime (|eps| <= {STRAIN_BOUND})")

    def as_array(self) -> np.ndarray:
        return np.array([self.eps_xx, self.eps_yy, self.eps_zz])

    def scaled(self, factor: float) -> "StrainTensorDiag":
        return StrainTensorDiag(*(factor * self.as_array()))


def state_zfs(state: PolaronicState, params: CenterParams) -> float:
    """2D (MHz) of one polaronic state from its electronic characters."""
    return state.c_a1 * params.d2_a2 + (state.c_ex + state.c_ey) * params.d2_e


def default_energy_cutoff(spectrum: Spectrum) -> float:
    return spectrum.n_max_used * spectrum.params_used.hbar_omega / 2.0


def zfs_vs_temperature(
    spectrum: Spectrum,
    params: CenterParams,
    temps,
    energy_cutoff: float | None = None,
    offset_mhz: float = 0.0,
) -> TemperatureCurve:
    """Boltzmann-weighted 2D(T) in MHz over states below ``energy_cutoff``.

    Every eigenstate enters separately, so degenerate multiplets carry their
    multiplicity automatically. ``offset_mhz`` is added after averaging.
    """
    temps = np.atleast_1d(np.asarray(temps, dtype=float))
    if np.any(temps <= 0):
        raise DomainError("temperatures must be positive")
    if energy_cutoff is None:
        energy_cutoff = default_energy_cutoff(spectrum)
    kept = [s for s in spectrum.states if s.energy_rel <= energy_cutoff]
    if not kept:
        raise DomainError(f"energy cutoff {energy_cutoff} meV excludes every state")
    energies = np.array([s.energy_rel for s in kept])
    d = np.array([state_zfs(s, params) for s in kept])
    # energies are >= 0 relative to the ground state, so no overflow
    w = np.exp(-energies[None, :] / (K_B * temps[:, None]))
    values = (w @ d) / w.sum(axis=1) + offset_mhz
    return TemperatureCurve(temps, values, "zfs", offset_mhz)


def bose_factor(energy, temperature):
    """Occupation 1/(exp(E/kT) - 1); exactly 0 at T -> 0+."""
    x = np.asarray(energy, dtype=float) / (K_B * np.asarray(temperature, dtype=float))
    return 1.0 / np.expm1(x)


def linewidth_model(temperature, a: float, delta_p: float, gamma_r: float, gamma_1: float):
    """Phonon-activated PLE linewidth in GHz.

    ``A * delta_p**3 * n(delta_p, T) + gamma_r + gamma_1`` with ``n`` the
    Bose occupation. ``temperature`` may be an array.
    """
    t = np.asarray(temperature, dtype=float)
    if np.any(t <= 0):
        raise DomainError("temperature must be > 0 K")
    if delta_p <= 0:
        raise DomainError("delta_p must be > 0")
    if gamma_r < 0 or gamma_1 < 0:
        raise DomainError("gamma_r and gamma_1 must be non-negative")
    with np.errstate(over="ignore"):
        result = a * delta_p**3 * bose_factor(delta_p, t) + gamma_r + gamma_1
    return float(result) if result.ndim == 0 else result


def temperature_grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive grid start, start+step, ..., stop."""
    if step <= 0 or stop < start:
        raise DomainError("temperature grid needs step > 0 and stop >= start")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def linewidth_curve(params: CenterParams, temps, a=None, gamma_1=None, delta_p=None) -> TemperatureCurve:
    a = params.linewidth_a if a is None else a
    gamma_1 = params.gamma_1 if gamma_1 is None else gamma_1
    delta_p = params.delta_p if delta_p is None else delta_p
    if a is None or gamma_1 is None or delta_p is None:
        raise DomainError("linewidth needs A, gamma_1 and delta_p")
    temps = np.atleast_1d(np.asarray(temps, dtype=float))
    return TemperatureCurve(temps, linewidth_model(temps, a, delta_p, params.gamma_r, gamma_1), "linewidth")


def zpl_strain_shift(coeffs, strain: StrainTensorDiag) -> float:
    """Linear ZPL shift in meV for couplings in eV/strain."""
    if coeffs is None:
        raise DomainError("no strain coupling coefficients available")
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (3,):
        raise DomainError("strain coefficients must be (a_xx, a_yy, a_zz)")
    return float(coeffs @ strain.as_array()) * 1000.0
