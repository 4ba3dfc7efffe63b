import pytest

from foliation_lab.calculus import SYMMETRIC, make_grid
from foliation_lab.sasakian import Weights

WEIGHT_FAMILY = [Weights(1, 1), Weights(2, 1), Weights(3, 2), Weights(1, 5)]


@pytest.fixture
def grid64():
    return make_grid(64)


@pytest.fixture
def grid128():
    return make_grid(128)


@pytest.fixture
def height_grid():
    return make_grid(192, SYMMETRIC)
