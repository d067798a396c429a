import pytest

from roughtop.catalogue import build_example


@pytest.fixture(scope="session")
def ex31():
    return build_example("ex3.1")


@pytest.fixture(scope="session")
def ex34():
    return build_example("ex3.4")


@pytest.fixture(scope="session")
def ex29():
    return build_example("ex2.9")


@pytest.fixture(scope="session")
def lab34(ex34):
    """Label-to-mask helper for the mod 11 example."""
    return ex34.space.universe.from_labels
