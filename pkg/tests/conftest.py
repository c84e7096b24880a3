import time

import numpy as np
import pytest

from mimozic.channel import (
    CovarianceConstraint,
    PerAntennaPowerConstraint,
    TotalPowerConstraint,
    ZicChannel,
)

I2 = np.eye(2)
I3 = np.eye(3)

F_EX1 = np.array([[1.0, 0.5], [0.8, -1.8]])
F_EX2 = np.diag([0.3, 0.9])
F_EX3 = np.array([[1.3, 1.1, 1.4], [1.5, -0.5, 3.0], [0.9, -0.36, 1.5]])
H2_EX3 = np.array([[1.0, 2.0, 0.5], [1.0, 1.0, 2.0], [0.5, 0.4, 0.5]])
S2BAR_EX3 = np.array([[1.8, 1.0, -0.4], [1.0, 5.0, 2.0], [-0.4, 2.0, 1.2]])
A_EX3 = np.diag([0.8, 0.5, 0.6])


@pytest.fixture
def ex1():
    return ZicChannel(I2, F_EX1, I2), TotalPowerConstraint(2, 2)


@pytest.fixture
def ex2():
    return ZicChannel(I2, F_EX2, I2)


@pytest.fixture
def ex2_total():
    return TotalPowerConstraint(1, 4)


@pytest.fixture
def ex2_antenna():
    return PerAntennaPowerConstraint((0.5, 0.5), (2, 2))


@pytest.fixture
def ex3():
    return ZicChannel(I3, F_EX3, H2_EX3), CovarianceConstraint(I3, S2BAR_EX3)


def rand_matrix(rng, m, n, cplx=False):
    M = rng.standard_normal((m, n))
    if cplx:
        M = M + 1j * rng.standard_normal((m, n))
    return M


def rand_psd(rng, n, cplx=False, rank=None, scale=1.0):
    Z = rand_matrix(rng, n, rank or n, cplx)
    return scale * (Z @ Z.conj().T) / n


def rand_hermitian(rng, n, cplx=False):
    Z = rand_matrix(rng, n, n, cplx)
    return 0.5 * (Z + Z.conj().T)


# ---------------------------------------------------------------------------
# acceptance summary


SUITE_BUDGET_S = 120.0
_ACCEPTANCE = []
_START = [0.0]


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE


def pytest_sessionstart(session):
    _START[0] = time.perf_counter()


def pytest_sessionfinish(session, exitstatus):
    if not _ACCEPTANCE:
        return
    elapsed = time.perf_counter() - _START[0]
    ok = elapsed < SUITE_BUDGET_S
    _ACCEPTANCE.append(
        f"[{'PASS' if ok else 'FAIL'}] criterion 8: full suite runtime "
        f"({elapsed:.1f} s, budget {SUITE_BUDGET_S:.0f} s)"
    )
    if not ok and session.exitstatus == 0:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for line in _ACCEPTANCE:
        terminalreporter.write_line(line)
