import numpy as np
import pytest

from gpesplit.grid import build_grid


@pytest.fixture
def grid():
    return build_grid(40.0, 128)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_complex(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
