import pytest

from partialmt import suites
from partialmt.syntax import Signature

SEED = suites.DEFAULT_SEED


@pytest.fixture
def r1():
    return Signature({"R": 1})


@pytest.fixture
def single_point():
    return suites.single_point_structure()


@pytest.fixture
def two_factor():
    return suites.two_factor_family()
