import numpy as np
import pytest

from mindecomp import known_state


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def ghz():
    return known_state("ghz3")


@pytest.fixture(scope="session")
def w_state():
    return known_state("w3")


@pytest.fixture(scope="session")
def ame43():
    return known_state("ame_4_3")


@pytest.fixture(scope="session")
def o16():
    return known_state("o16")
