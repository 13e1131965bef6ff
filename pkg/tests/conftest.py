import sys

import numpy as np
import pytest

from tomokraus import DEFAULT_GRID, RayGrid
from tomokraus.io import DEFAULT_TOLERANCES

COARSE = RayGrid(8.0, 65, 16)


@pytest.fixture(scope="session")
def grid():
    return DEFAULT_GRID


@pytest.fixture(scope="session")
def coarse():
    return COARSE


@pytest.fixture(scope="session")
def tol():
    return dict(DEFAULT_TOLERANCES)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
