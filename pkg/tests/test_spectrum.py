import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sivpolaron import V1, V2, CenterParams, DomainError, NumericalError, polaronic_gap, polaronic_spectrum
from sivpolaron.hamiltonian import assemble, assemble_with_spin_orbit
from sivpolaron.phonons import enumerate_basis
from sivpolaron.spectrum import (
    Spectrum,
    character_weights,
    diagonalize,
    group_degenerate,
    project_characters,
    so_doublet_structure,
)

# reference multiplet energies (meV), A1 weight per state and E weight summed per multiplet
REFERENCE_MULTIPLETS = {
    "V1": ([0.000, 4.829, 20.081, 66.607], [2, 1, 2], [0.84, 0.12, 0.26, 0.53], [0.16, 1.76, 0.74, 0.94]),
    "V2": ([0.000, 22.070, 32.824, 89.576], [2, 1, 2], [0.94, 0.14, 0.18, 0.69], [0.06, 1.72, 0.82, 0.62]),
}


def test_diagonalize_trivial():
    vals, vecs = diagonalize(np.array([[2.5]]))
    assert vals[0] == 2.5 and abs(vecs[0, 0]) == 1.0


def test_diagonalize_crystal_field():
    from sivpolaron.params import crystal_field_matrix

    assert np.allclose(diagonalize(crystal_field_matrix(3.0)).values, [-2, 1, 1])


def test_diagonalize_rejects_nonfinite():
    with pytest.raises(NumericalError):
        diagonalize(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_diagonalize_residuals_and_oracle():
    h = assemble(V1, enumerate_basis(8))
    vals, vecs = diagonalize(h)
    resid = np.linalg.norm(h.matrix @ vecs - vecs * vals, axis=0)
    assert resid.max() <= 1e-10 * np.linalg.norm(h.matrix)
    # independent route: general (non-symmetric) eigenvalue solver
    oracle = np.sort(np.linalg.eigvals(h.matrix).real)
    assert np.allclose(vals, oracle, atol=1e-8)


@pytest.mark.parametrize("center, params", [("V1", V1), ("V2", V2)])
def test_reference_multiplets(center, params):
    spec = polaronic_spectrum(params, n_max=8)
    energies, _, c_a1, c_e_sum = REFERENCE_MULTIPLETS[center]
    groups = spec.multiplets()[:4]
    assert [len(g) for g in groups] == [1, 2, 1, 2]
    assert np.allclose([g[0].energy_rel for g in groups], energies, atol=5e-3)
    assert np.allclose([np.mean([s.c_a1 for s in g]) for g in groups], c_a1, atol=0.01)
    assert np.allclose([sum(s.c_e for s in g) for g in groups], c_e_sum, atol=0.03)


def test_polaronic_gap(v1_spectrum, v2_spectrum):
    assert polaronic_gap(v1_spectrum) == pytest.approx(4.829, abs=1e-3)
    assert polaronic_gap(v2_spectrum) == pytest.approx(22.070, abs=1e-3)


def test_polaronic_gap_toy():
    h = assemble(CenterParams(hbar_omega=1.5), enumerate_basis(1))
    spec = project_characters(h, diagonalize(h))
    assert polaronic_gap(spec) == pytest.approx(1.5)


def test_polaronic_gap_needs_two_multiplets():
    h = assemble(CenterParams(hbar_omega=1.5), enumerate_basis(0))
    with pytest.raises(DomainError):
        polaronic_gap(project_characters(h, diagonalize(h)))


def test_character_sum_rule(v1_spectrum, v2_spectrum):
    for spec in (v1_spectrum, v2_spectrum):
        c = spec.characters
        assert np.abs(c.sum(axis=1) - 1).max() < 1e-9
        assert c.min() >= -1e-15 and c.max() <= 1 + 1e-12


def test_uncoupled_ground_is_pure_a1():
    spec = polaronic_spectrum(CenterParams(hbar_omega=50.0, delta=5.0), n_max=3)
    assert spec.states[0].c_a1 == pytest.approx(1.0, abs=1e-14)


def test_spectrum_bookkeeping(v1_spectrum):
    e = v1_spectrum.energies
    assert e[0] == 0.0 and np.all(np.diff(e) >= 0)
    assert all(s.multiplicity == len(g) for g in v1_spectrum.multiplets() for s in g)
    # E pair degenerate to solver precision
    assert abs(e[1] - e[2]) < 1e-6
    cut = 8 * V1.hbar_omega / 2
    assert all(s.converged == (s.energy_rel <= cut) for s in v1_spectrum.states)


@settings(max_examples=25, deadline=None)
@given(st.floats(0, 2 * np.pi))
def test_multiplet_sums_rotation_invariant(theta):
    h = assemble(V1, enumerate_basis(6))
    vals, vecs = diagonalize(h)
    pair = vecs[:, 1:3]
    rot = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    base = character_weights(h, pair).sum(axis=0)
    rotated = character_weights(h, pair @ rot).sum(axis=0)
    assert rotated[0] == pytest.approx(base[0], abs=1e-12)
    assert rotated[1:].sum() == pytest.approx(base[1:].sum(), abs=1e-12)


@pytest.mark.parametrize("params", [V1, V2])
def test_truncation_convergence(params):
    gaps = [polaronic_gap(polaronic_spectrum(params, n_max=n)) for n in (8, 9, 10)]
    assert abs(gaps[2] - gaps[0]) < 0.2
    assert np.all(np.diff(gaps) >= -1e-9)  # variational: energies relax monotonically


def test_group_degenerate():
    groups = group_degenerate([0.0, 1.0, 1.0 + 1e-9, 3.0], 1e-6)
    assert [list(g) for g in groups] == [[0], [1, 2], [3]]


# spin-orbit fine structure

def _so(params, n_max):
    h = assemble_with_spin_orbit(params, enumerate_basis(n_max))
    return so_doublet_structure(h, diagonalize(h))


def test_vibronic_free_delta():
    branches = _so(CenterParams(hbar_omega=100.0, lambda_par=0.29), 0)
    # A1 (4 states) sits at 0, between the E doublets, so the branch holds all 12
    e_branch = branches[0]
    assert e_branch.n_states == 12
    e_only = CenterParams(hbar_omega=100.0, delta=5.0, lambda_par=0.29)
    a1, e = _so(e_only, 0)
    assert len(e.doublet_energies) == 4
    assert e.delta == pytest.approx(0.29 / 6, rel=1e-12)
    assert e.delta == pytest.approx(0.04833, abs=1e-5)
    assert sorted(e.abs_ms) == [0.5, 0.5, 1.5, 1.5]
    assert e.d_so == pytest.approx(0.0, abs=1e-14)
    assert a1.d_so == pytest.approx(0.0, abs=1e-14)


def test_zero_spin_orbit_limit():
    p = CenterParams(e_jt=60.0, hbar_omega=30.0, delta=4.0, lambda_par=0.0)
    branches = _so(p, 4)
    spinless = polaronic_spectrum(p, n_max=4)
    assert [b.n_states for b in branches[:3]] == [4, 8, 4]
    for b, e in zip(branches, spinless.multiplet_energies()[:3]):
        assert np.allclose(b.doublet_energies, e, atol=1e-9)
        assert b.d_so == pytest.approx(0.0, abs=1e-12)
        assert not b.ambiguous


def test_spin_orbit_kramers_and_labels(v1_spin_orbit):
    h, (vals, _), branches = v1_spin_orbit
    assert np.abs(vals[0::2] - vals[1::2]).max() < 1e-9
    assert [b.n_states for b in branches[:4]] == [4, 8, 4, 8]
    for b in branches[:4]:
        assert not b.ambiguous
        assert sorted(set(b.abs_ms)) == [0.5, 1.5]


def test_spin_orbit_structure_is_perturbative(v1_spin_orbit, v1_spectrum):
    # fine structure stays centred on the spinless multiplet energies
    _, _, branches = v1_spin_orbit
    for b, e in zip(branches[:4], v1_spectrum.multiplet_energies()[:4]):
        assert abs(b.energy - e) < V1.lambda_par


def test_requires_spin():
    h = assemble(V1, enumerate_basis(2))
    with pytest.raises(DomainError):
        so_doublet_structure(h, diagonalize(h))
