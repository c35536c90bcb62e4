import pytest

from sivpolaron import V1, V2, polaronic_spectrum
from sivpolaron.hamiltonian import assemble_with_spin_orbit
from sivpolaron.phonons import enumerate_basis
from sivpolaron.spectrum import diagonalize, so_doublet_structure


@pytest.fixture(scope="session")
def v1_spectrum():
    return polaronic_spectrum(V1, n_max=8)


@pytest.fixture(scope="session")
def v2_spectrum():
    return polaronic_spectrum(V2, n_max=8)


@pytest.fixture(scope="session")
def v1_spin_orbit():
    h = assemble_with_spin_orbit(V1, enumerate_basis(8))
    pairs = diagonalize(h)
    return h, pairs, so_doublet_structure(h, pairs)


# one summary line per acceptance criterion
_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in _acceptance.items():
        name = nodeid.split("::")[-1]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
