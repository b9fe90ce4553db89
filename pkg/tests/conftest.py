import numpy as np
import pytest

from drlinrel.linrel import from_matrix, normal_cone_of_subspace

HALF_ROT = 0.5 * np.array([[1.0, -1.0], [1.0, 1.0]])
C_SKEW = np.array([[0.0, 1.0], [-1.0, 0.0]])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def two_lines():
    """Normal cones of the lines R(1,0) and R(1,1) in R^2."""
    return normal_cone_of_subspace([[1.0], [0.0]]), normal_cone_of_subspace([[1.0], [1.0]])


@pytest.fixture
def zero2():
    return from_matrix(np.zeros((2, 2)))


# PASS/FAIL lines from the acceptance suite, repeated in the terminal summary
# so they show up even when output is captured.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
