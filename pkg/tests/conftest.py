import pytest

from support import load_example


@pytest.fixture(scope="session")
def example61():
    return load_example("example6_1")


@pytest.fixture(scope="session")
def example51():
    return load_example("example5_1")


@pytest.fixture(scope="session")
def example52():
    return load_example("example5_2")
