import numpy as np
import pytest

from heleshaw.spectral import PeriodicField

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_field(rng, n, kmax, scale):
    """Band-limited real field with modes 1..kmax of random size <= scale."""
    modes = [(k, scale * rng.uniform(-1, 1) / k, rng.uniform(0, 2 * np.pi)) for k in range(1, kmax + 1)]
    return PeriodicField.from_modes(modes, n)
