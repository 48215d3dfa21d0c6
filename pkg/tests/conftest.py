import numpy as np
import pytest

from logdiff.grid import make_grid


@pytest.fixture
def grid3():
    return make_grid(20.0, 400, 1.0, 3)


@pytest.fixture
def grid5():
    return make_grid(20.0, 400, 1.0, 5)


def relmax(a, b):
    a, b = np.asarray(a, float), np.asarray(b, float)
    return float(np.max(np.abs(a - b) / np.abs(b)))
