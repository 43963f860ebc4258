import pytest

from ccsymbol.errors import NotAUnit
from ccsymbol.units import decompose, is_sharp, nu, pi

from conftest import S


def test_nu():
    assert nu(S("t1", "Q", 2)) == (1, 0)
    assert nu(S("2 + t1", "Z/4")) == (1,)
    assert nu(S("3", "GF(5)")) == (0,)
    assert nu(S("2*t1^-1*t2 + t1^3", "Z/4", 2)) == (3, 0)


def test_nu_over_a_product():
    f = S("[1, 0]*t1 + [0, 1]*t1^2", "Z/4 x GF(5)")
    (v,) = nu(f)
    assert v.values == (1, 2)


def test_decompose_monomial():
    d = decompose(S("3*t1", "GF(5)"))
    assert (d.nu, d.c, str(d.plus_part), str(d.minus_part)) == ((1,), 3, "1", "1")


def test_decompose_pi_witness():
    f = S("1 + 3*t1 + 2*t1^-1", "Z/4")
    d = decompose(f)
    assert d.c == 3 and f.coeff((0,)) == 1
    assert d.plus_part == S("1 + t1", "Z/4")
    assert d.minus_part == S("1 + 2*t1^-1", "Z/4")
    assert d.reassemble() == f


def test_pure_minus_element():
    d = decompose(S("1 + 2*t1^-1", "Z/4"))
    assert d.c == 1 and d.minus_part == S("1 + 2*t1^-1", "Z/4")
    assert pi(S("1 + 2*t1^-1", "Z/4")) == 1


def test_pi_of_a_scaled_monomial():
    assert pi(S("4*t1^-3", "GF(5)")) == 4


def test_pi_frozen_values():
    # constant term of log(f/3) is -e/9 - e^2/54; exponentiate and scale by 3
    assert str(pi(S("3 + e*t1^-1 + t1", "Q[e]/(e^3)"))) == "3 - 1/3*e - 1/27*e^2"
    assert str(pi(S("1 + 2*t1^-1 + 2*t1", "Z/4"))) == "1"


def test_sharpness():
    assert is_sharp(S("1 + t1", "Q"))
    assert is_sharp(S("1 + 2*t1^-1", "Z/4"))
    assert not is_sharp(S("1 + t1^-1", "GF(5)"))


def test_non_units_rejected():
    with pytest.raises(NotAUnit):
        nu(S("2 + 2*t1", "Z/4"))
