import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("lab", max_examples=40, deadline=None, derandomize=True)
settings.load_profile("lab")


@pytest.fixture
def rng():
    return np.random.default_rng(42)
