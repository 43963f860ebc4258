"""Unit group of L^n(A): valuation nu, projection pi, the four-factor decomposition."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import NotAUnit, PrecisionExhausted
from .rings import Product, RingValue, ZFunction
from .series import (
    IteratedSeries,
    Reach,
    _geometric_exact,
    _in_box,
    _mul_terms,
    classify,
    is_lex_negative,
    join_components,
    leading_term,
    make_box,
    split_components,
)

PEEL_CAP = 5000


@dataclass(frozen=True)
class UnitDecomposition:
    nu: tuple
    c: RingValue
    plus_part: IteratedSeries
    minus_part: IteratedSeries

    def reassemble(self):
        f = self.plus_part * self.minus_part if self.minus_part.is_exact else self.minus_part * self.plus_part
        return f.scale(self.c)


def _require_exact(f):
    if f.box is not None:
        raise PrecisionExhausted("expected an exact Laurent polynomial")


def nu_vector(f):
    """nu for a connected coefficient ring, as a tuple of ints."""
    _require_exact(f)
    return leading_term(f.ring, f.terms, f.n)[0]


def nu(f):
    """The valuation: a tuple of n ZFunctions (plain-int comparable)."""
    _require_exact(f)
    parts = [leading_term(p.ring, p.terms, p.n)[0] for p in split_components(f)]
    return tuple(ZFunction(tuple(v[i] for v in parts)) for i in range(f.n))


def _peel(ring, n, terms, hi):
    """Strip V- factors off a series with nu = 0 and leading coefficient 1.

    Returns (rest, minus, exact): ``rest`` has no lex-negative support and
    ``minus`` is the accumulated V- factor.  Terms that can no longer
    influence exponents <= ``hi`` are dropped; ``exact`` records whether any
    were.
    """
    zero_e = (0,) * n
    s = {e: c for e, c in terms.items() if e != zero_e}
    if terms.get(zero_e) != ring.one:
        s[zero_e] = ring.sub(terms.get(zero_e, ring.zero), ring.one)
        if s[zero_e] == ring.zero:
            del s[zero_e]
    lows, highs = classify(ring, s)
    reach = Reach(n, lows, highs, ring.nil_bound - 1)
    exact = True

    def prune(d):
        nonlocal exact
        kept = {e: c for e, c in d.items() if reach.ok(e, hi)}
        if len(kept) != len(d):
            exact = False
        return kept

    u = dict(terms)
    minus = {zero_e: ring.one}
    for _ in range(PEEL_CAP):
        w = {e: c for e, c in u.items() if is_lex_negative(e)}
        if not w:
            return u, minus, exact
        for c in w.values():
            if not ring.is_nilpotent_fast(c):
                raise NotAUnit("non-nilpotent coefficient below the leading term")
        inv = _geometric_exact(ring, w, n)
        u = prune(_mul_terms(ring, u, inv))
        one_w = dict(w)
        one_w[zero_e] = ring.add(one_w.get(zero_e, ring.zero), ring.one)
        minus = prune(_mul_terms(ring, minus, one_w))
    raise PrecisionExhausted("V- peeling did not terminate")


def _decompose_connected(f, box):
    ring, n = f.ring, f.n
    v, a = leading_term(ring, f.terms, n)
    ainv = ring.inv(a)
    u = {tuple(x - y for x, y in zip(e, v)): ring.mul(c, ainv) for e, c in f.terms.items()}
    hi = (0,) * n if box is None else tuple(max(h, 0) for _, h in box)
    rest, minus, exact = _peel(ring, n, u, hi)
    c0 = rest.get((0,) * n, ring.zero)
    cinv = ring.inv(c0)
    if cinv is None:
        raise NotAUnit("constant part is not a unit")
    c = ring.mul(a, c0)
    plus = {e: ring.mul(x, cinv) for e, x in rest.items()}
    if exact:
        return v, c, IteratedSeries(ring, n, plus), IteratedSeries(ring, n, minus)
    if box is None:
        box = make_box(n, 0, 0)
    return (v, c, IteratedSeries(ring, n, plus, box), IteratedSeries(ring, n, minus, box))


def decompose(f, box=None):
    """f = t^nu * c * plus * minus.

    The parts are exact whenever the peeling closes up finitely; otherwise
    (possible for n >= 2) they carry ``box``, defaulting to [-8, 8]^n.
    """
    _require_exact(f)
    if box is None:
        box = make_box(f.n, 8)
    parts = [_decompose_connected(p, box) for p in split_components(f)]
    if not isinstance(f.ring, Product):
        v, c, plus, minus = parts[0]
        return UnitDecomposition(tuple(ZFunction(x) for x in v), RingValue(f.ring, c), plus, minus)
    nus = tuple(ZFunction(tuple(p[0][i] for p in parts)) for i in range(f.n))
    c = tuple(p[1] for p in parts)

    def joined(idx):
        comps = [p[idx] for p in parts]
        if any(q.box is not None for q in comps):
            comps = [q if q.box is not None else q.restrict(box) for q in comps]
        return join_components(f.ring, comps)

    return UnitDecomposition(nus, RingValue(f.ring, c), joined(2), joined(3))


def pi_raw(f):
    """pi for a connected ring, as a raw value."""
    _require_exact(f)
    return _decompose_connected(f, None)[1]


def pi(f):
    _require_exact(f)
    raws = tuple(_decompose_connected(p, None)[1] for p in split_components(f))
    return RingValue(f.ring, raws if isinstance(f.ring, Product) else raws[0])


def is_sharp(f):
    """1 - (lex <= 0 part of f) has only nilpotent coefficients."""
    _require_exact(f)
    ring = f.ring
    zero_e = (0,) * f.n
    for e, c in f.terms.items():
        if is_lex_negative(e) or e == zero_e:
            d = ring.sub(ring.one, c) if e == zero_e else c
            if not ring.is_nilpotent_fast(d):
                return False
    if zero_e not in f.terms and not ring.is_nilpotent_fast(ring.one):
        return False
    return True


def in_box(e, box):
    return _in_box(e, box)
