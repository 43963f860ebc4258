"""Continuous endomorphisms of L^n(A) given by the images of t_1, ..., t_n."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iproduct

from .errors import DimensionMismatch, InvalidEndo, NotInvertible, PrecisionExhausted, UnstablePrecision
from .forms import TopForm, jacobian
from .rings import Product, RingValue, ZFunction
from .series import (
    IteratedSeries,
    Reach,
    classify,
    make_box,
    normalize_unit,
    quotient,
    quotient_factors,
    split_components,
)
from .truncation import Truncation
from .units import nu, nu_vector, pi_raw

REGION_CAP = 200000


def int_det(m):
    """Determinant of a small integer matrix (fraction-free elimination)."""
    a = [list(r) for r in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class EndoMap:
    images: tuple
    upsilon: tuple
    det_d: ZFunction

    @property
    def n(self):
        return len(self.images)

    @property
    def ring(self):
        return self.images[0].ring

    def component_upsilon(self, k):
        return tuple(tuple(x.values[k] for x in row) for row in self.upsilon)

    @property
    def is_unipotent(self):
        """Upsilon is the identity on every component."""
        n = self.n
        return all(self.upsilon[r][c] == (1 if r == c else 0) for r in range(n) for c in range(n))


def make_endo(images):
    images = tuple(images)
    n = len(images)
    if n == 0 or any(g.n != n for g in images):
        raise DimensionMismatch("need n images in n variables")
    if any(g.ring != images[0].ring for g in images):
        raise DimensionMismatch("images over different rings")
    cols = [nu(g) for g in images]
    upsilon = tuple(tuple(cols[c][r] for c in range(n)) for r in range(n))
    ncomp = len(upsilon[0][0].values)
    dets = []
    for k in range(ncomp):
        m = [[upsilon[r][c].values[k] for c in range(n)] for r in range(n)]
        for r in range(n):
            if m[r][r] <= 0:
                raise InvalidEndo(f"diagonal entry {r + 1} of Upsilon is {m[r][r]}")
            for c in range(r):
                if m[r][c]:
                    raise InvalidEndo("Upsilon is not upper-triangular")
        dets.append(int_det(m))
    return EndoMap(images, upsilon, ZFunction(tuple(dets)))


def identity_endo(ring, n):
    return make_endo([IteratedSeries.variable(ring, n, i + 1) for i in range(n)])


class _Powers:
    """Cached non-negative powers of a fixed exact series."""

    def __init__(self, g):
        self.cache = [IteratedSeries.const(g.ring, g.n, 1), g]

    def __getitem__(self, k):
        while len(self.cache) <= k:
            self.cache.append(self.cache[-1] * self.cache[1])
        return self.cache[k]


def _monomial_product(powers, exps):
    out = None
    for p, k in zip(powers, exps):
        if k:
            out = p[k] if out is None else out * p[k]
    return out


def apply(phi, f, box=None):
    """f(g_1, ..., g_n); exact unless negative powers of non-monomials occur."""
    if f.box is not None:
        raise PrecisionExhausted("apply needs an exact series")
    n = phi.n
    ring = f.ring
    if not f.terms:
        return f
    shift = [max(0, -min(e[i] for e in f.terms)) for i in range(n)]
    powers = [_Powers(g) for g in phi.images]
    num = IteratedSeries(ring, n)
    for e, c in f.terms.items():
        m = _monomial_product(powers, [x + s for x, s in zip(e, shift)])
        term = IteratedSeries.const(ring, n, RingValue(ring, c)) if m is None else m.scale(RingValue(ring, c))
        num = num + term
    den = _monomial_product(powers, shift)
    if den is None:
        return num
    return quotient(num, den, make_box(n, 8) if box is None else box)


def compose(phi, psi):
    """phi o psi: t_i -> phi(psi(t_i))."""
    if phi.n != psi.n or phi.ring != psi.ring:
        raise DimensionMismatch("endomorphisms of different algebras")
    images = [apply(phi, g) for g in psi.images]
    if any(g.box is not None for g in images):
        raise PrecisionExhausted("composite images are not Laurent polynomials")
    return make_endo(images)


def transport_form(phi, w, box=None):
    """phi(w) for w = density * dt: density(g) * J(g) * dt."""
    moved = apply(phi, w.density, box)
    return TopForm(moved * jacobian(list(phi.images)) if moved.box is None else jacobian(list(phi.images)) * moved)


def _residue_terms(f, images):
    """(numerator builder, jacobian) for the residue formula of the inverse."""
    return f * jacobian(list(images)), [_Powers(g) for g in images]


def _inverse_coeff(fj, powers, l):
    n = len(l)
    ring = fj.ring
    k = [-x - 1 for x in l]
    num = fj
    pos = _monomial_product(powers, [max(x, 0) for x in k])
    if pos is not None:
        num = num * pos
    factors = [(p[1], max(-x, 0)) for p, x in zip(powers, k)]
    target = (-1,) * n
    q = quotient_factors(num, factors, tuple((x, x) for x in target))
    return q.terms.get(target, ring.zero)


def _check_invertible(phi):
    if phi.det_d != 1:
        raise NotInvertible(f"d = {phi.det_d}; the inverse formula needs d = 1")


def inverse_apply(g, f, box=None):
    """phi_g^{-1}(f) on ``box`` via sum_l res(f g^{-l-1} J(g) dt) t^l."""
    phi = g if isinstance(g, EndoMap) else make_endo(g)
    _check_invertible(phi)
    if f.box is not None:
        raise PrecisionExhausted("inverse_apply needs an exact series")
    n = phi.n
    box = make_box(n, 8) if box is None else box
    fj, powers = _residue_terms(f, phi.images)
    terms = {}
    for l in iproduct(*[range(lo, hi + 1) for lo, hi in box]):
        terms[l] = _inverse_coeff(fj, powers, l)
    return IteratedSeries(f.ring, n, terms, box)


def pi_region(f, images):
    """Exponents (relative to nu) whose inverse-image coefficients fix pi.

    With Upsilon the identity, phi_g^{-1}(f) * t^{-nu(f)} is supported in
    supp(f) - nu(f) plus the monoid generated by the normalized tails of the
    g_i, and any product with nil_bound nilpotent factors vanishes.  Only
    exponents that can still combine down to 0 matter for pi.
    """
    ring, n = f.ring, f.n
    budget = ring.nil_bound - 1
    _, _, sf = normalize_unit(ring, f.terms, n)
    gtails = [normalize_unit(ring, g.terms, n)[2] for g in images]
    lows, highs = _generator_classes(ring, [sf] + gtails)
    reach = Reach(n, lows, highs, budget)
    zero = (0,) * n
    vlow = set(_generator_classes(ring, gtails)[0])
    moves = sorted({(v, 1 if v in vlow else 0) for s in gtails for v in s})
    flow = set(classify(ring, sf)[0])
    start = [(zero, budget)] + [(e, budget - (1 if e in flow else 0)) for e in sf]
    seen = set()
    best = {}
    stack = []
    for e, b in start:
        if reach.ok(e, zero, b) and best.get(e, -1) < b:
            best[e] = b
            stack.append((e, b))
    while stack:
        e, b = stack.pop()
        if (e, b) in seen:
            continue
        seen.add((e, b))
        for v, cost in moves:
            b2 = b - cost
            e2 = tuple(x + y for x, y in zip(e, v))
            if b2 < 0 or best.get(e2, -1) >= b2 or not reach.ok(e2, zero, b2):
                continue
            best[e2] = b2
            stack.append((e2, b2))
        if len(best) > REGION_CAP:
            raise PrecisionExhausted("pi region too large")
    return sorted(best)


def _pairing_connected(f, images):
    v = nu_vector(f)
    fj, powers = _residue_terms(f, images)
    terms = {}
    for e in pi_region(f, images):
        l = tuple(x + y for x, y in zip(e, v))
        c = _inverse_coeff(fj, powers, l)
        if c != f.ring.zero:
            terms[l] = c
    return pi_raw(IteratedSeries(f.ring, f.n, terms))


def _generator_classes(ring, tails):
    """(lows, highs) for exponents drawn from several tails.

    An exponent counts as low only if every occurrence has a nilpotent
    coefficient; otherwise it must be lex-positive and is a high.
    """
    merged = {}
    for s in tails:
        for e, c in s.items():
            if e not in merged or not ring.is_nilpotent_fast(c):
                merged[e] = c
    lows, highs = classify(ring, merged)
    return tuple(sorted(lows)), tuple(sorted(highs))


class _Inverse:
    """psi = phi^{-1}(t) as psi_i = t_i W_i inside a truncation.

    Writing g_i = c_i t_i (1 + s_i), the relations g_i(psi) = t_i say
    W_i^{-1} = D_i := c_i (1 + s_i(psi)).  Both W_i and its inverse are
    tracked: each pass sets W_i^{-1} <- D_i and W_i <- W_i (2 - D_i W_i).
    A pass fixes at least one more layer of generator depth and the
    truncation has finitely many layers, so the pair stabilizes; a stable
    pair has W_i W_i^{-1} = 1 and is the fixed point.
    """

    def __init__(self, images, lows, highs):
        ring, n = images[0].ring, images[0].n
        self.ring = ring
        self.tr = Truncation(ring, n, lows, highs)
        self.low = set(lows)
        tr = self.tr
        norm = [normalize_unit(ring, g.terms, n) for g in images]
        self.w = [tr.const(ring.inv(c)) for _, c, _ in norm]
        self.winv = [tr.const(c) for _, c, _ in norm]
        self.powers = {}
        two = tr.const(ring.from_int(2))
        for _ in range(REGION_CAP):
            dens = [tr.scale(self.subst(s), c) for _, c, s in norm]
            ws = [tr.mul(w, tr.add(two, tr.scale(tr.mul(d, w), ring.neg(ring.one))))
                  for w, d in zip(self.w, dens)]
            self.powers = {}
            if ws == self.w and dens == self.winv:
                return
            self.w, self.winv = ws, dens
        raise PrecisionExhausted("fixed point for the inverse did not stabilize")

    def wp(self, j, k):
        key = (j, k)
        if key not in self.powers:
            base = self.w[j] if k > 0 else self.winv[j]
            self.powers[key] = self.tr.power(base, abs(k))
        return self.powers[key]

    def subst(self, s):
        """1 + s(psi) for a tail s."""
        tr = self.tr
        total = tr.const(self.ring.one)
        for v, c in s.items():
            term = tr.generator(v, c, 1 if v in self.low else 0)
            for j, k in enumerate(v):
                if not term:
                    break
                if k:
                    term = tr.mul(term, self.wp(j, k))
            total = tr.add(total, term)
        return total


@lru_cache(maxsize=512)
def _inverse_for(images, lows, highs):
    return _Inverse(images, lows, highs)


def _pairing_fixed_point(f, images):
    """pi(phi^{-1}(f)) = pi(a W^nu (1 + s_f(psi))) for f = a t^nu (1 + s_f)."""
    ring, n = f.ring, f.n
    nu_f, a, sf = normalize_unit(ring, f.terms, n)
    tails = [sf] + [normalize_unit(ring, g.terms, n)[2] for g in images]
    inv = _inverse_for(tuple(images), *_generator_classes(ring, tails))
    tr = inv.tr
    body = inv.subst(sf)
    for j, k in enumerate(nu_f):
        if k:
            body = tr.mul(body, inv.wp(j, k))
    return tr.pi(tr.scale(body, a))


def _pairing_by_box(f, phi, box):
    h = inverse_apply(phi, f, box)
    return pi_raw(h.truncated())


PAIRING_METHODS = ("fixed_point", "residue")


def pairing(f, g, box=None, method="fixed_point"):
    """<f, g> = pi(phi_g^{-1}(f)).

    When Upsilon(g) is the identity the answer is exact: either by the
    truncated fixed point (default) or by residues over the coefficients
    located by ``pi_region``.  Otherwise pi of the truncation to ``box`` is
    compared with the truncation to the doubled box.
    """
    if method not in PAIRING_METHODS:
        raise ValueError(f"unknown pairing method {method!r}")
    phi = g if isinstance(g, EndoMap) else make_endo(g)
    _check_invertible(phi)
    if f.box is not None:
        raise PrecisionExhausted("pairing needs an exact series")
    ring = f.ring
    fparts = split_components(f)
    gparts = list(zip(*[split_components(x) for x in phi.images]))
    if phi.is_unipotent:
        fn = _pairing_fixed_point if method == "fixed_point" else _pairing_connected
        raws = [fn(fp, gp) for fp, gp in zip(fparts, gparts)]
    else:
        box = make_box(f.n, 4) if box is None else box
        big = tuple((2 * lo, 2 * hi) for lo, hi in box)
        raws = []
        for k, (fp, gp) in enumerate(zip(fparts, gparts)):
            sub = make_endo(gp)
            a, b = _pairing_by_box(fp, sub, box), _pairing_by_box(fp, sub, big)
            if a != b:
                raise UnstablePrecision(f"pairing changed when the box was doubled (component {k})")
            raws.append(a)
    return RingValue(ring, tuple(raws) if isinstance(ring, Product) else raws[0])
