import numpy as np
import pytest

# fixed seed for every random unitary / state used by the property tests
TEST_SEED = 20240611


@pytest.fixture
def rng():
    return np.random.default_rng(TEST_SEED)
