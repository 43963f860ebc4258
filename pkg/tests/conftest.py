import pytest

from ccsymbol.parse import parse_ring, parse_series
from ccsymbol.rings import RingValue


def S(text, ring, n=1):
    """Series from text; ``ring`` may be a spec string."""
    if isinstance(ring, str):
        ring = parse_ring(ring)
    return parse_series(text, n, ring)


def V(ring, text):
    """Ring element from text, via a constant series."""
    if isinstance(ring, str):
        ring = parse_ring(ring)
    f = parse_series(text, 1, ring)
    return RingValue(ring, f.terms.get((0,), ring.zero))


@pytest.fixture
def Z4():
    return parse_ring("Z/4")


@pytest.fixture
def GF5():
    return parse_ring("GF(5)")


@pytest.fixture
def Qe2():
    return parse_ring("Q[e]/(e^2)")


@pytest.fixture
def Qe3():
    return parse_ring("Q[e]/(e^3)")
