import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from nclp.algebra import ToleranceConfig, matrix_algebra


@pytest.fixture
def cfg():
    return ToleranceConfig(seed=1234)


@pytest.fixture
def m2():
    return matrix_algebra(2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240)
