import math

import numpy as np
import pytest

from ostro.core import Grid1D, PhysParams

ACCEPTANCE_LINES = {}


@pytest.fixture
def unit_params():
    return PhysParams(1, 1)


@pytest.fixture
def wide_grid():
    return Grid1D(-10.0, 10.0, 401)


@pytest.fixture
def period_grid():
    return Grid1D(0.0, 2 * math.pi, 256, periodic=True)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
