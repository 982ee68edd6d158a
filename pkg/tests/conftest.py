import numpy as np
import pytest

from resonator_modes.grid import make_grid
from resonator_modes.pump import default_width, hermite_gauss_pump


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def grid32():
    return make_grid(1.0, 32)


@pytest.fixture
def grid100():
    return make_grid(1.0, 100)


@pytest.fixture
def hg2_32(grid32):
    return hermite_gauss_pump(grid32, 2, default_width(grid32))


@pytest.fixture
def hg2_100(grid100):
    return hermite_gauss_pump(grid100, 2, default_width(grid100))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
