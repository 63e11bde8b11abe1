import numpy as np
import pytest

from hvqm import HermitianOperator, StateVector


@pytest.fixture
def rng():
    return np.random.default_rng(20260824)


def random_state(n, rng):
    return StateVector.random(n, rng)


def random_hermitian(n, rng):
    return HermitianOperator.random(n, rng)
