import numpy as np
import pytest
from hypothesis import settings

from oracles import ACCEPTANCE, FOUR, HOTELS
from skydiag.core import Dataset

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def hotels():
    return Dataset.from_points(HOTELS)


@pytest.fixture
def four():
    return Dataset.from_points(FOUR)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
