import pytest

from tiltmut import fixtures
from tiltmut.algebra import FDAlgebra, build_table
from tiltmut.quiver import parse_presentation

CORPUS = ["e2", "e1_3", "e1_4", "two_vertex"]


def _alg(name):
    return FDAlgebra(build_table(parse_presentation(fixtures.builtin_text(name))))


@pytest.fixture(scope="session")
def e2_alg():
    return _alg("e2")


@pytest.fixture(scope="session")
def e13_alg():
    return _alg("e1_3")


@pytest.fixture(scope="session")
def e14_alg():
    return _alg("e1_4")


@pytest.fixture(scope="session")
def tv_alg():
    return _alg("two_vertex")


@pytest.fixture(scope="session")
def kx2_alg():
    return _alg("loop_at_1")


@pytest.fixture(scope="session")
def corpus_algs(e2_alg, e13_alg, e14_alg, tv_alg):
    return {"e2": e2_alg, "e1_3": e13_alg, "e1_4": e14_alg, "two_vertex": tv_alg}
