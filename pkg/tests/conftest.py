import numpy as np
import pytest

from catcoh.quantum.engine import TwoLevelUnitary


@pytest.fixture
def hadamard():
    return TwoLevelUnitary.hadamard()


@pytest.fixture
def rng():
    return np.random.default_rng(7)
