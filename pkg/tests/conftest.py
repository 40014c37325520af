import numpy as np
import pytest
import scipy.linalg

ACCEPTANCE_LINES = []


def record(criterion, passed, detail=""):
    line = f"[criterion {criterion}] {'PASS' if passed else 'FAIL'} {detail}".rstrip()
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def oracle_power(M, p):
    """Matrix power through expm/logm; shares no code with the package."""
    M = np.asarray(M, dtype=complex)
    return scipy.linalg.expm(float(p) * scipy.linalg.logm(M))


def oracle_product(w, A, B):
    out = np.eye(np.asarray(A).shape[0], dtype=complex)
    for letter, e in w.blocks:
        out = out @ oracle_power(A if letter == "A" else B, e)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)
