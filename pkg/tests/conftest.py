import os

import pytest
from hypothesis import HealthCheck, settings

from betanormal.expansions import BetaContext
from betanormal.numerics import BETA_KL, BETA_T, EXAMPLE43, GOLDEN, MULTINACCI4

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def ctx_T():
    return BetaContext(BETA_T)


@pytest.fixture(scope="session")
def ctx_golden():
    return BetaContext(GOLDEN)


@pytest.fixture(scope="session")
def ctx_kl():
    return BetaContext(BETA_KL)


@pytest.fixture(scope="session")
def ctx_multi():
    return BetaContext(MULTINACCI4)


@pytest.fixture(scope="session")
def ctx_ex43():
    return BetaContext(EXAMPLE43)
