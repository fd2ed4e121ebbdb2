import pytest
from hypothesis import HealthCheck, settings

from robust_contracts import Instance, gen_tight_ub

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def family2():
    return gen_tight_ub(0.25)


@pytest.fixture
def opt_out_only():
    return Instance([[1.0, 0.0]], [0.0, 1.0], [0.0])

