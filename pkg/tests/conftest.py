import math

import numpy as np
import pytest

from parawrist import default_params, solve_ik

ACCEPTANCE_LINES: list[str] = []


def random_pose(rng, radius=0.7):
    """Uniform over alpha in [-pi, pi] and the open tilt disc of ``radius``."""
    r = radius * math.sqrt(rng.uniform(0.0, 1.0)) * (1.0 - 1e-9)
    w = rng.uniform(-math.pi, math.pi)
    return np.array([rng.uniform(-math.pi, math.pi), r * math.cos(w), r * math.sin(w)])


def random_theta(rng, params, radius=0.6):
    """Motor angles of a random feasible pose, kept off the limit so perturbations stay feasible."""
    return solve_ik(params, random_pose(rng, radius)).theta


@pytest.fixture(scope="session")
def params():
    return default_params()


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
