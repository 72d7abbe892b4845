import numpy as np
import pytest

from segwt.segments import validate_instance


@pytest.fixture
def i2():
    """Two nested-start segments: crossing sets {1,2} at x=2, {2} at x=3."""
    return validate_instance([(1, 3, 1), (2, 4, 2)])


@pytest.fixture
def i4():
    """Four interleaved segments with shuffled y order."""
    return validate_instance([(1, 5, 3), (2, 7, 1), (3, 6, 4), (4, 8, 2)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
