import pytest
from hypothesis import HealthCheck, settings

from mvfsim import catalog

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def table9():
    return catalog.load_builtin("table9-line-a")


@pytest.fixture(scope="session")
def micro3():
    return catalog.load_builtin("micro-3node")


@pytest.fixture(scope="session")
def presat():
    return catalog.load_builtin("micro-presatisfied")
