import functools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sivpolaron import (
    V1,
    V2,
    DomainError,
    StrainTensorDiag,
    linewidth_model,
    polaronic_spectrum,
    state_zfs,
    zfs_vs_temperature,
    zpl_strain_shift,
)
from sivpolaron.observables import TemperatureCurve, linewidth_curve, temperature_grid
from sivpolaron.params import GAMMA_R_DEFAULT, K_B
from sivpolaron.spectrum import PolaronicState


def test_state_zfs_ground(v1_spectrum, v2_spectrum):
    assert state_zfs(v1_spectrum.states[0], V1) == pytest.approx(1211, abs=15)
    assert state_zfs(v2_spectrum.states[0], V2) == pytest.approx(1400, abs=15)


def test_state_zfs_pure_a1():
    s = PolaronicState(0.0, 1.0, 0.0, 0.0, 0, 1)
    assert state_zfs(s, V1) == V1.d2_a2


def test_zfs_low_temperature_limit(v1_spectrum):
    curve = zfs_vs_temperature(v1_spectrum, V1, [0.1])
    assert curve.values[0] == pytest.approx(state_zfs(v1_spectrum.states[0], V1), abs=0.1)


def test_zfs_high_temperature_negative(v1_spectrum):
    assert zfs_vs_temperature(v1_spectrum, V1, [300.0]).values[0] < 0


def test_zfs_v2_slower_than_v1(v1_spectrum, v2_spectrum):
    def drop(spec, p):
        d0, d50 = zfs_vs_temperature(spec, p, [0.1, 50.0]).values
        return (d0 - d50) / d0

    assert drop(v1_spectrum, V1) > drop(v2_spectrum, V2)


@pytest.mark.parametrize("center", ["V1", "V2"])
def test_zfs_bounds_and_monotonic(center, v1_spectrum, v2_spectrum):
    spec, p = (v1_spectrum, V1) if center == "V1" else (v2_spectrum, V2)
    t = np.arange(1.0, 301.0)
    d = zfs_vs_temperature(spec, p, t).values
    cut = 8 * p.hbar_omega / 2
    per_state = [state_zfs(s, p) for s in spec.states if s.energy_rel <= cut]
    assert min(per_state) <= d.min() and d.max() <= max(per_state)
    assert np.all(np.diff(d) <= 1e-9)


def test_zfs_matches_direct_boltzmann_sum(v2_spectrum):
    # oracle: explicit loop over states with partition function
    t = 120.0
    num = den = 0.0
    for s in v2_spectrum.states:
        if s.energy_rel <= 8 * V2.hbar_omega / 2:
            w = math.exp(-s.energy_rel / (K_B * t))
            num += w * (s.c_a1 * V2.d2_a2 + (s.c_ex + s.c_ey) * V2.d2_e)
            den += w
    assert zfs_vs_temperature(v2_spectrum, V2, [t]).values[0] == pytest.approx(num / den, rel=1e-12)


def test_zfs_offset_and_cutoff(v1_spectrum):
    base = zfs_vs_temperature(v1_spectrum, V1, [10.0, 20.0])
    shifted = zfs_vs_temperature(v1_spectrum, V1, [10.0, 20.0], offset_mhz=211.0)
    assert np.allclose(shifted.values - base.values, 211.0)
    assert shifted.offset_applied == 211.0
    ground_only = zfs_vs_temperature(v1_spectrum, V1, [300.0], energy_cutoff=1.0)
    assert ground_only.values[0] == pytest.approx(state_zfs(v1_spectrum.states[0], V1))
    with pytest.raises(DomainError):
        zfs_vs_temperature(v1_spectrum, V1, [10.0], energy_cutoff=-1.0)
    with pytest.raises(DomainError):
        zfs_vs_temperature(v1_spectrum, V1, [0.0])


@given(st.lists(st.floats(0.5, 1000.0), min_size=1, max_size=20, unique=True).map(sorted))
def test_zfs_convex_combination(temps):
    spec = _small_spectrum()
    d = zfs_vs_temperature(spec, V1, temps).values
    per_state = [state_zfs(s, V1) for s in spec.states if s.energy_rel <= 6 * V1.hbar_omega / 2]
    assert np.all(d >= min(per_state) - 1e-9) and np.all(d <= max(per_state) + 1e-9)


@functools.lru_cache
def _small_spectrum():
    return polaronic_spectrum(V1, n_max=6)


def test_temperature_curve_validation():
    with pytest.raises(DomainError):
        TemperatureCurve([2.0, 1.0], [0.0, 0.0], "zfs")
    with pytest.raises(DomainError):
        TemperatureCurve([0.0, 1.0], [0.0, 0.0], "zfs")


def test_temperature_grid_inclusive():
    g = temperature_grid(1, 300, 1)
    assert len(g) == 300 and g[0] == 1 and g[-1] == 300
    assert np.allclose(temperature_grid(4, 28, 4), [4, 8, 12, 16, 20, 24, 28])


def test_linewidth_zero_temperature_limit():
    g = linewidth_model(1e-3, 0.37, 4.829, GAMMA_R_DEFAULT, 0.065)
    assert g == GAMMA_R_DEFAULT + 0.065
    assert g == pytest.approx(0.0915, abs=1e-4)


def test_linewidth_hand_value():
    x = 4.829 / (0.0861733 * 20.0)
    hand = 0.37 * 4.829**3 / (math.exp(x) - 1.0) + 1 / (2 * math.pi * 6e-9) / 1e9 + 0.065
    assert math.exp(x) - 1 == pytest.approx(15.48, abs=0.01)
    g = linewidth_model(20.0, 0.37, 4.829, GAMMA_R_DEFAULT, 0.065)
    assert g == pytest.approx(hand, rel=1e-12)
    assert g == pytest.approx(2.78, abs=0.005)


def test_linewidth_no_phonon_term():
    t = np.linspace(1, 300, 50)
    assert np.allclose(linewidth_model(t, 0.0, 4.829, 0.0265, 0.065), 0.0915)


def test_linewidth_monotonic_and_activation():
    t = np.linspace(4, 100, 500)
    g = linewidth_model(t, 0.37, 4.829, GAMMA_R_DEFAULT, 0.065)
    assert np.all(np.diff(g) > 0)
    g0 = GAMMA_R_DEFAULT + 0.065
    g4, g8 = (linewidth_model(T, 0.37, 4.829, GAMMA_R_DEFAULT, 0.065) - g0 for T in (4.0, 8.0))
    bose = lambda T: 1 / (math.exp(4.829 / (K_B * T)) - 1)  # noqa: E731
    assert g4 / g8 == pytest.approx(bose(4.0) / bose(8.0), rel=1e-12)
    assert g4 / g8 == pytest.approx(math.exp(-4.829 / (K_B * 4) + 4.829 / (K_B * 8)), rel=1e-2)


@pytest.mark.parametrize("kw", [{"temperature": 0.0}, {"temperature": -5.0}, {"delta_p": 0.0}])
def test_linewidth_domain(kw):
    args = {"temperature": 10.0, "a": 0.37, "delta_p": 4.829, "gamma_r": 0.0265, "gamma_1": 0.065}
    args.update(kw)
    with pytest.raises(DomainError):
        linewidth_model(**args)


def test_linewidth_curve_from_preset():
    c = linewidth_curve(V2, [4.0, 28.0])
    assert c.kind == "linewidth"
    assert c.values[0] == pytest.approx(V2.gamma_r + 0.082, abs=1e-6)


def test_strain_examples():
    assert zpl_strain_shift(V1.strain_coeffs, StrainTensorDiag()) == 0.0
    assert zpl_strain_shift(V1.strain_coeffs, StrainTensorDiag(eps_xx=7.5e-5)) == pytest.approx(-0.0795, abs=1e-12)
    assert zpl_strain_shift(V2.strain_coeffs, StrainTensorDiag(eps_zz=-1e-3)) == pytest.approx(6.25, abs=1e-12)


@given(st.tuples(*[st.floats(-0.004, 0.004)] * 3))
def test_strain_linearity(eps):
    s = StrainTensorDiag(*eps)
    assert zpl_strain_shift(V1.strain_coeffs, s.scaled(2.0)) == 2.0 * zpl_strain_shift(V1.strain_coeffs, s)


def test_strain_bounds():
    with pytest.raises(DomainError):
        StrainTensorDiag(eps_zz=0.02)
    with pytest.raises(DomainError):
        zpl_strain_shift(None, StrainTensorDiag())
