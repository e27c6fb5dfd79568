import numpy as np
import pytest

from hermlab import TimeGrid, default_grid


@pytest.fixture(scope="session")
def grid1d():
    """Default 1-d box grid good for degrees up to 32."""
    return default_grid(1, 32, 400)


@pytest.fixture(scope="session")
def grid2d():
    return default_grid(2, 8, 128)


@pytest.fixture(scope="session")
def tgrid1d():
    return TimeGrid.log_uniform(1)


@pytest.fixture(scope="session")
def tgrid2d():
    return TimeGrid.log_uniform(2)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
