import numpy as np
import pytest
from hypothesis import HealthCheck, settings

# numba compilation makes first calls slow; per-example deadlines are meaningless
settings.register_profile(
    "levywave",
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("levywave")


@pytest.fixture(scope="session")
def two_point():
    from levywave import LevyModel

    return LevyModel.two_point(mass=5.0, jump=1.0)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260825)
