import numpy as np
import pytest

from lattice_limit import ResolventProbe, ScalingFunction


@pytest.fixture
def meyer():
    return ScalingFunction()


@pytest.fixture
def probe():
    return ResolventProbe(-1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
