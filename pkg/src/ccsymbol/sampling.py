"""Random exact units and endomorphisms for property checks."""
from __future__ import annotations

import random

from .rings import LocalExtension, Product, RingValue
from .series import IteratedSeries, is_lex_positive


def random_scalar(ring, rng, span=3):
    """Arbitrary element (small integer coefficients)."""
    if isinstance(ring, Product):
        return tuple(random_scalar(r, rng, span) for r in ring.factors)
    if isinstance(ring, LocalExtension):
        return tuple(random_scalar(ring.base, rng, span) if alive else ring.base.zero
                     for alive in ring._alive)
    return ring.from_int(rng.randint(-span, span))


def random_unit_scalar(ring, rng, span=3):
    for _ in range(1000):
        a = random_scalar(ring, rng, span)
        if ring.inv(a) is not None:
            return a
    return ring.one


def random_nilpotent(ring, rng, span=3):
    """A nilpotent element (possibly zero)."""
    if isinstance(ring, Product):
        return tuple(random_nilpotent(r, rng, span) for r in ring.factors)
    for _ in range(1000):
        a = random_scalar(ring, rng, span)
        if ring.is_nilpotent_fast(a):
            return a
    return ring.zero


def random_exponent(n, rng, radius=2):
    return tuple(rng.randint(-radius, radius) for _ in range(n))


def random_unit(ring, n, rng, terms=2, radius=2, nu_radius=1, nu=None):
    """t^nu * c * (1 + highs + nilpotent lows), multiplied out exactly."""
    nu = random_exponent(n, rng, nu_radius) if nu is None else tuple(nu)
    body = {(0,) * n: random_unit_scalar(ring, rng)}
    for _ in range(rng.randint(0, terms)):
        e = random_exponent(n, rng, radius)
        if not any(e):
            continue
        c = random_scalar(ring, rng) if is_lex_positive(e) else random_nilpotent(ring, rng)
        body[e] = ring.add(body.get(e, ring.zero), c)
    f = IteratedSeries(ring, n, body).shift(nu)
    return f


def random_sharp(ring, n, rng, terms=2, radius=2):
    """1 + highs + nilpotent lows (sharp, nu = 0)."""
    return _sharp(ring, n, rng, terms, radius)


def _sharp(ring, n, rng, terms, radius):
    body = {(0,) * n: ring.one}
    for _ in range(rng.randint(0, terms)):
        e = random_exponent(n, rng, radius)
        if not any(e):
            continue
        c = random_scalar(ring, rng) if is_lex_positive(e) else random_nilpotent(ring, rng)
        body[e] = ring.add(body.get(e, ring.zero), c)
    return IteratedSeries(ring, n, body)


def random_unipotent_images(ring, n, rng, terms=1, radius=2):
    """Images t_i * (sharp unit) * c_i: an automorphism with identity Upsilon."""
    out = []
    for i in range(n):
        t = IteratedSeries.variable(ring, n, i + 1)
        c = RingValue(ring, random_unit_scalar(ring, rng))
        out.append((t * _sharp(ring, n, rng, terms, radius)).scale(c))
    return out


def random_triangular_images(ring, n, rng, diag_choices=(1, 2, 3), terms=1, radius=2):
    """Images with upper-triangular Upsilon and positive diagonal."""
    out = []
    for i in range(n):
        col = [0] * n
        col[i] = rng.choice(diag_choices)
        for r in range(i):
            col[r] = rng.randint(-1, 1)
        c = RingValue(ring, random_unit_scalar(ring, rng))
        mono = IteratedSeries.monomial(ring, n, col)
        out.append((mono * _sharp(ring, n, rng, terms, radius)).scale(c))
    return out


def rng_for(seed):
    return random.Random(seed)
