import numpy as np
import pytest

from fourthorder.fock import TransferMatrix, TwoPhotonDensityMatrix, dimension

_ACCEPTANCE: dict[str, str] = {}


def haar_unitary(M: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary by QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((M, M)) + 1j * rng.standard_normal((M, M))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_density(M: int, rng: np.random.Generator, rank: int | None = None) -> TwoPhotonDensityMatrix:
    D = dimension(M)
    rank = D if rank is None else rank
    g = rng.standard_normal((D, rank)) + 1j * rng.standard_normal((D, rank))
    rho = g @ g.conj().T
    return TwoPhotonDensityMatrix(M, rho / np.trace(rho).real)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_unitary():
    return lambda M, rng: TransferMatrix(haar_unitary(M, rng))


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[name] = report.outcome.upper()


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_ACCEPTANCE.items()):
        terminalreporter.write_line(f"{'PASS' if outcome == 'PASSED' else 'FAIL'}  {name}")
