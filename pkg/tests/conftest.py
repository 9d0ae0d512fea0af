import pytest

from curvepull import PullbackSystem, builtin


@pytest.fixture(scope="session")
def rabbit():
    return builtin("rabbit")


@pytest.fixture(scope="session")
def dendrite():
    return builtin("dendrite")


@pytest.fixture(scope="session")
def rabbit_system(rabbit):
    return PullbackSystem(rabbit)


@pytest.fixture(scope="session")
def dendrite_system(dendrite):
    return PullbackSystem(dendrite)
