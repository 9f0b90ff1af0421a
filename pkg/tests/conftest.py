import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(autouse=True)
def _default_tolerance():
    """Keep the shared validation tolerance at its default across tests."""
    from wernerdecay import config

    config.reset_validation_tolerance()
    yield
    config.reset_validation_tolerance()
