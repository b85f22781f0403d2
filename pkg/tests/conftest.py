import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("vsl", max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("vsl")


@pytest.fixture
def rng():
    return np.random.default_rng(0x5EED)
