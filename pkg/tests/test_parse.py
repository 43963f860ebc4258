import pytest

from ccsymbol.errors import BadCoefficient, ParseError, UnknownVariable, UnsupportedRing
from ccsymbol.parse import parse_ring, parse_series, parse_vector
from ccsymbol.rings import IntegersMod, LocalExtension, Product, Rationals


def test_ring_specs():
    assert parse_ring("Z/4") == IntegersMod(4)
    assert parse_ring("Q[e1]/(e1^2)") == LocalExtension(Rationals(), ("e1",), (2,))
    P = parse_ring("Z/4 x GF(5)")
    assert isinstance(P, Product) and len(P.factors) == 2


@pytest.mark.parametrize("text", ["Z", "Q", "Z/12", "GF(7)", "Q[e]/(e^3)", "GF(5)[a,b]/(a^2,b^3)",
                                  "Z/4 x GF(5) x Q[e]/(e^2)"])
def test_ring_spec_round_trip(text):
    assert parse_ring(text).spec() == text


@pytest.mark.parametrize("text,pos", [("Z/", 2), ("R", 0), ("Q[e]/(f^2)", 6), ("Q[e]/(e^2", 9), ("Z/4 x", 5)])
def test_ring_errors_carry_positions(text, pos):
    with pytest.raises(ParseError) as err:
        parse_ring(text)
    assert err.value.position == pos


def test_unsupported_rings():
    with pytest.raises(UnsupportedRing):
        parse_ring("GF(6)")


def test_series_examples():
    f = parse_series("1 + 3*t1 + 2*t1^-1", 1, "Z/4")
    assert f.terms == {(0,): 1, (1,): 3, (-1,): 2}
    assert list(parse_series("t1*t2^-1", 2, "Q").terms) == [(1, -1)]
    g = parse_series("1 + e1*t1^-1", 1, "Q[e1]/(e1^2)")
    assert str(g) == "e1*t1^-1 + 1"


def test_whitespace_and_grouping():
    a = parse_series("  -(1+t1)^2 *t2-3/2", 2, "Q")
    assert str(a) == "-3/2 - t2 - 2*t1*t2 - t1^2*t2"


@pytest.mark.parametrize("text,n,ring,exc,pos", [
    ("t3", 2, "Q", UnknownVariable, 0),
    ("1 + x", 1, "Q", UnknownVariable, 4),
    ("1/2*t1", 1, "Z", BadCoefficient, 0),
    ("1/2", 1, "Z/4", BadCoefficient, 0),
    ("e*t1", 1, "Z x Q[e]/(e^2)", BadCoefficient, 0),
    ("(1+t1)^-1", 1, "Q", ParseError, 0),
    ("1 + ", 1, "Q", ParseError, 4),
    ("2 3", 1, "Q", ParseError, 2),
])
def test_series_errors(text, n, ring, exc, pos):
    with pytest.raises(exc) as err:
        parse_series(text, n, ring)
    assert err.value.position == pos


def test_product_coefficients():
    f = parse_series("[1, 2 + e]*t1 - [0, 1/2]*t1^-1*t2 + 3", 2, "Z/4 x Q[e]/(e^3)")
    assert str(f) == "[3, 3] + [1, 2 + e]*t1 + [0, -1/2]*t1^-1*t2"


def test_vectors():
    assert parse_vector("1,0,-2") == (1, 0, -2)
    assert parse_vector("(1, 1)", 2) == (1, 1)
    with pytest.raises(ParseError):
        parse_vector("1,a")
