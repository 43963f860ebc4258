"""Iterated Laurent series over a coefficient ring.

A series is a finite map from exponent vectors to nonzero raw coefficients.
Exact series (``box is None``) are Laurent polynomials.  Boxed series are
approximations of genuinely infinite elements: every coefficient whose
exponent lies in the box is exact, nothing is claimed outside it.

Lexicographic order puts the *last* coordinate first: ``l < l'`` iff
``l[-1] < l'[-1]`` or they tie and the remaining prefix compares the same way.
"""
from __future__ import annotations

from .errors import DimensionMismatch, MixedRings, NotAUnit, OutsidePrecision, PrecisionExhausted
from .rings import Product, RingValue

DEFAULT_EXPANSION_CAP = 20000


def lex_key(l):
    return l[::-1]


def lex_cmp(l, m):
    """-1, 0 or 1 comparing exponent vectors in the series order."""
    if len(l) != len(m):
        raise DimensionMismatch(f"{len(l)} vs {len(m)}")
    a, b = lex_key(tuple(l)), lex_key(tuple(m))
    return (a > b) - (a < b)


def is_lex_negative(l):
    for x in reversed(l):
        if x:
            return x < 0
    return False


def is_lex_positive(l):
    for x in reversed(l):
        if x:
            return x > 0
    return False


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _in_box(e, box):
    return all(lo <= x <= hi for x, (lo, hi) in zip(e, box))


def make_box(n, lo, hi=None):
    """Cube [lo, hi]^n (hi defaults to -lo)."""
    if hi is None:
        lo, hi = -abs(lo), abs(lo)
    return tuple((lo, hi) for _ in range(n))


def box_around(center, lo, hi):
    return tuple((c + lo, c + hi) for c in center)


class IteratedSeries:
    __slots__ = ("ring", "n", "terms", "box")

    def __init__(self, ring, n, terms=None, box=None):
        if n < 1:
            raise DimensionMismatch("need at least one variable")
        zero = ring.zero
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise DimensionMismatch(f"exponent {e} in {n} variables")
            if c != zero and (box is None or _in_box(e, box)):
                clean[e] = c
        if box is not None:
            box = tuple((int(lo), int(hi)) for lo, hi in box)
            if len(box) != n or any(lo > hi for lo, hi in box):
                raise DimensionMismatch(f"bad box {box}")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "box", box)

    def __setattr__(self, name, value):
        raise AttributeError("IteratedSeries is immutable")

    # constructors
    @classmethod
    def const(cls, ring, n, c=1):
        return cls(ring, n, {(0,) * n: ring(c).raw})

    @classmethod
    def monomial(cls, ring, n, exp, c=1):
        return cls(ring, n, {tuple(exp): ring(c).raw})

    @classmethod
    def variable(cls, ring, n, i):
        """t_i, 1-based."""
        return cls.monomial(ring, n, tuple(1 if j == i - 1 else 0 for j in range(n)))

    @property
    def is_exact(self):
        return self.box is None

    def _check(self, other):
        if not isinstance(other, IteratedSeries):
            raise TypeError(f"expected IteratedSeries, got {type(other).__name__}")
        if other.ring != self.ring:
            raise MixedRings(f"{self.ring.spec()} vs {other.ring.spec()}")
        if other.n != self.n:
            raise DimensionMismatch(f"{self.n} vs {other.n} variables")

    def _coerce(self, other):
        if isinstance(other, (int, RingValue)) or type(other).__name__ == "Fraction":
            return IteratedSeries.const(self.ring, self.n, other)
        self._check(other)
        return other

    def __eq__(self, other):
        if not isinstance(other, IteratedSeries):
            return NotImplemented
        return (self.ring == other.ring and self.n == other.n
                and self.box == other.box and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ring, self.n, self.box, frozenset(self.terms.items())))

    def _linear(self, other, op):
        other = self._coerce(other)
        box = _intersect(self.box, other.box)
        f = getattr(self.ring, op)
        zero = self.ring.zero
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = f(out.get(e, zero), c)
        return IteratedSeries(self.ring, self.n, out, box)

    def __add__(self, other):
        return self._linear(other, "add")

    __radd__ = __add__

    def __sub__(self, other):
        return self._linear(other, "sub")

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        neg = self.ring.neg
        return IteratedSeries(self.ring, self.n, {e: neg(c) for e, c in self.terms.items()}, self.box)

    def __mul__(self, other):
        other = self._coerce(other)
        if self.box is not None and other.box is not None:
            raise PrecisionExhausted("product of two boxed series is not determined by their boxes")
        if self.box is not None:
            return other * self
        box = None
        if other.box is not None:
            if not self.terms:
                return IteratedSeries(self.ring, self.n, {}, other.box)
            mins = [min(e[i] for e in self.terms) for i in range(self.n)]
            maxs = [max(e[i] for e in self.terms) for i in range(self.n)]
            box = tuple((lo + mx, hi + mn) for (lo, hi), mn, mx in zip(other.box, mins, maxs))
            if any(lo > hi for lo, hi in box):
                raise PrecisionExhausted("product box is empty")
        return IteratedSeries(self.ring, self.n, _mul_terms(self.ring, self.terms, other.terms, box), box)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            if len(self.terms) == 1 and self.box is None:
                (e, c), = self.terms.items()
                inv = self.ring.inv(c)
                if inv is None:
                    raise NotAUnit(f"{self} is not a unit")
                return IteratedSeries(self.ring, self.n, {tuple(-x * -k for x in e): self.ring.pow(inv, -k)})
            raise NotAUnit("negative powers of non-monomials need invert_unit and a box")
        if self.box is not None and k > 1:
            raise PrecisionExhausted("powers of boxed series are not determined")
        result = IteratedSeries.const(self.ring, self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def coeff(self, l):
        l = tuple(l)
        if len(l) != self.n:
            raise DimensionMismatch(f"{l} in {self.n} variables")
        if self.box is not None and not _in_box(l, self.box):
            raise OutsidePrecision(f"{l} lies outside {self.box}")
        return RingValue(self.ring, self.terms.get(l, self.ring.zero))

    def shift(self, exp):
        """Multiply by t^exp."""
        box = None if self.box is None else tuple((lo + x, hi + x) for (lo, hi), x in zip(self.box, exp))
        return IteratedSeries(self.ring, self.n, {_vadd(e, exp): c for e, c in self.terms.items()}, box)

    def scale(self, c):
        raw = self.ring(c).raw if not isinstance(c, RingValue) else c.raw
        mul = self.ring.mul
        return IteratedSeries(self.ring, self.n, {e: mul(raw, v) for e, v in self.terms.items()}, self.box)

    def restrict(self, box):
        return IteratedSeries(self.ring, self.n, self.terms, _intersect(self.box, box))

    def truncated(self):
        """The stored Laurent polynomial, forgetting the box."""
        return IteratedSeries(self.ring, self.n, self.terms)

    def map_coeffs(self, fn, ring):
        return IteratedSeries(ring, self.n, {e: fn(c) for e, c in self.terms.items()}, self.box)

    def support(self):
        return sorted(self.terms, key=lex_key)

    def is_constant(self):
        return self.box is None and all(not any(e) for e in self.terms)

    def __str__(self):
        return format_series(self)

    def __repr__(self):
        tail = "" if self.box is None else f", box={self.box}"
        return f"IteratedSeries({self.ring.spec()}, n={self.n}: {self}{tail})"


def _intersect(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return tuple((max(x[0], y[0]), min(x[1], y[1])) for x, y in zip(a, b))


def _mul_terms(ring, a, b, box=None):
    mul, add, zero = ring.mul, ring.add, ring.zero
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            if box is not None and not _in_box(e, box):
                continue
            p = mul(c1, c2)
            if p != zero:
                out[e] = add(out.get(e, zero), p)
    return {e: c for e, c in out.items() if c != zero}


def format_series(f):
    ring = f.ring
    if not f.terms:
        return "0"
    pieces = []
    for e in f.support():
        c = f.terms[e]
        mono = "*".join(f"t{i + 1}" if x == 1 else f"t{i + 1}^{x}" for i, x in enumerate(e) if x)
        if isinstance(ring, Product):
            body = ring.fmt(c) + (f"*{mono}" if mono else "")
            pieces.append(("+", body))
            continue
        for q, gens in ring.scalar_terms(c):
            factors = [n if k == 1 else f"{n}^{k}" for n, k in gens]
            if mono:
                factors.append(mono)
            mag = abs(q)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            pieces.append(("-" if q < 0 else "+", body))
    sign, body = pieces[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def s_arith(f, g, op):
    """Series operation by name: ``add``, ``sub`` or ``mul``."""
    f._check(g)
    return {"add": f.__add__, "sub": f.__sub__, "mul": f.__mul__}[op](g)


def derivative(f, i):
    """Partial derivative in t_i (1-based)."""
    if not 1 <= i <= f.n:
        raise DimensionMismatch(f"no variable t{i} in {f.n} variables")
    k = i - 1
    ring = f.ring
    out = {}
    for e, c in f.terms.items():
        if e[k]:
            e2 = e[:k] + (e[k] - 1,) + e[k + 1:]
            out[e2] = ring.scale(c, e[k])
    box = None
    if f.box is not None:
        box = tuple((lo - 1, hi - 1) if j == k else (lo, hi) for j, (lo, hi) in enumerate(f.box))
    return IteratedSeries(ring, f.n, out, box)


def coeff(f, l):
    return f.coeff(l)


# ---------------------------------------------------------------------------
# product-ring plumbing

def split_components(f):
    """Series over each factor of a product ring (a 1-tuple for connected rings)."""
    if not isinstance(f.ring, Product):
        return (f,)
    return tuple(
        IteratedSeries(r, f.n, {e: c[i] for e, c in f.terms.items()}, f.box)
        for i, r in enumerate(f.ring.factors)
    )


def join_components(ring, parts):
    if not isinstance(ring, Product):
        (p,) = parts
        return p
    n = parts[0].n
    keys = set()
    for p in parts:
        keys.update(p.terms)
    box = None
    for p in parts:
        box = _intersect(box, p.box)
    terms = {e: tuple(p.terms.get(e, r.zero) for p, r in zip(parts, ring.factors)) for e in keys}
    return IteratedSeries(ring, n, terms, box)


# ---------------------------------------------------------------------------
# leading term and the pruned expansion engine

def leading_term(ring, terms, n):
    """(nu, a): exponent of the leading unit coefficient and that coefficient.

    Connected rings only.  Reading the series as Laurent series in t_n over
    the (n-1)-variable ring, the first t_n-coefficient that is not nilpotent
    must itself be a unit; recurse into it.
    """
    if n == 0:
        a = terms.get((), ring.zero)
        if ring.inv(a) is None:
            raise NotAUnit(f"{ring.fmt(a)} is not a unit of {ring.spec()}")
        return (), a
    levels = {}
    for e, c in terms.items():
        levels.setdefault(e[-1], {})[e[:-1]] = c
    nil = ring.is_nilpotent_fast
    for j in sorted(levels):
        sub = levels[j]
        if all(nil(c) for c in sub.values()):
            continue
        nu, a = leading_term(ring, sub, n - 1)
        return nu + (j,), a
    raise NotAUnit("no unit leading coefficient")


class Reach:
    """Necessary condition for a partial product to still land below ``hi``.

    The multiplier vectors split into *lows* (lex-negative or zero exponents,
    nilpotent coefficients, at most ``budget`` of them in any surviving
    product, overridable per call) and *highs* (lex-positive exponents, grouped by the index of
    their last nonzero coordinate, which is positive).  Working from the last
    coordinate down, the number of highs of each level is bounded by the
    available slack, which in turn bounds how far lower coordinates can fall.
    """

    def __init__(self, n, lows, highs, budget):
        self.n = n
        lowdec = [0] * n
        for v in lows:
            for i in range(n):
                lowdec[i] = max(lowdec[i], -v[i])
        self.lowunit = lowdec
        self.budget = budget
        self.minpos = [0] * n
        self.dec = [[0] * n for _ in range(n)]
        for v in highs:
            lvl = max(i for i in range(n) if v[i])
            mp = self.minpos[lvl]
            self.minpos[lvl] = v[lvl] if mp == 0 else min(mp, v[lvl])
            for i in range(lvl):
                self.dec[lvl][i] = max(self.dec[lvl][i], -v[i])
        self._cache = {}

    def ok(self, e, hi, budget=None):
        if budget is None:
            budget = self.budget
        if budget < 0:
            return False
        key = (e, hi, budget)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        n = self.n
        K = [0] * n
        res = True
        for i in range(n - 1, -1, -1):
            d = budget * self.lowunit[i]
            for j in range(i + 1, n):
                if K[j]:
                    d += K[j] * self.dec[j][i]
            slack = hi[i] - e[i] + d
            if slack < 0:
                res = False
                break
            mp = self.minpos[i]
            K[i] = slack // mp if mp else 0
        self._cache[key] = res
        return res


def classify(ring, terms):
    """Split multiplier exponents into (lows, highs).

    Lows carry nilpotent coefficients (so only boundedly many can appear in
    a nonzero product) and may point anywhere; highs are lex-positive.  A
    non-nilpotent coefficient at a non-positive exponent is an error.
    """
    lows, highs = [], []
    for e, c in terms.items():
        if ring.is_nilpotent_fast(c):
            lows.append(e)
        elif is_lex_positive(e):
            highs.append(e)
        else:
            raise NotAUnit(f"non-nilpotent coefficient at non-positive exponent {e}")
    return lows, highs


def normalize_unit(ring, terms, n):
    """(nu, a, s) with f = a * t^nu * (1 + s) and s free of a constant term."""
    nu, a = leading_term(ring, terms, n)
    ainv = ring.inv(a)
    mul = ring.mul
    s = {}
    zero_e = (0,) * n
    for e, c in terms.items():
        e2 = _vsub(e, nu)
        v = mul(c, ainv)
        if e2 == zero_e:
            v = ring.sub(v, ring.one)
        if v != ring.zero:
            s[e2] = v
    return nu, a, s


def _geometric_exact(ring, s, n):
    """sum_k (-s)^k for s with nilpotent coefficients only (terminates)."""
    neg = {e: ring.neg(c) for e, c in s.items()}
    total = {(0,) * n: ring.one}
    term = {(0,) * n: ring.one}
    for _ in range(DEFAULT_EXPANSION_CAP):
        term = _mul_terms(ring, term, neg)
        if not term:
            return total
        for e, c in term.items():
            total[e] = ring.add(total.get(e, ring.zero), c)
    raise PrecisionExhausted("geometric series of a nilpotent failed to terminate")


def _expand(ring, n, states, mult, lowset, reach, hi, budget, cap):
    """sum_{k>=0} X * mult^k for X given by ``states``, pruned by ``reach``.

    ``states`` maps (exponent, lows used) to coefficients; every returned
    state can still reach exponents <= ``hi`` with the remaining budget.
    """
    add, mul, zero = ring.add, ring.mul, ring.zero
    ok = reach.ok
    T = {k: c for k, c in states.items() if ok(k[0], hi, budget - k[1])}
    acc = {}
    steps = 0
    items = [(v, d, 1 if v in lowset else 0) for v, d in mult.items()]
    while T:
        for k, c in T.items():
            acc[k] = add(acc.get(k, zero), c)
        nxt = {}
        for (e, used), c in T.items():
            for v, d, cost in items:
                u2 = used + cost
                e2 = tuple(x + y for x, y in zip(e, v))
                if not ok(e2, hi, budget - u2):
                    continue
                p = mul(c, d)
                if p != zero:
                    key = (e2, u2)
                    nxt[key] = add(nxt.get(key, zero), p)
        T = {k: c for k, c in nxt.items() if c != zero}
        steps += 1
        if steps > cap:
            raise PrecisionExhausted(f"expansion did not terminate within {cap} steps")
    return acc


def quotient_factors(num, factors, box, cap=DEFAULT_EXPANSION_CAP):
    """num / prod(den^k for den, k in factors) on ``box``.

    Dividing by one small factor at a time keeps the multiplier sets short;
    between divisions every term that could still reach the box is kept.
    """
    ring = num.ring
    n = num.n
    factors = [(d, k) for d, k in factors if k]
    for d, _ in factors:
        num._check(d)
        if d.box is not None:
            raise PrecisionExhausted("quotient needs exact denominators")
    if num.box is not None:
        raise PrecisionExhausted("quotient needs an exact numerator")
    if isinstance(ring, Product):
        comps = [split_components(d) for d, _ in factors]
        parts = []
        for i, nc in enumerate(split_components(num)):
            parts.append(quotient_factors(nc, [(c[i], k) for c, (_, k) in zip(comps, factors)], box, cap))
        if any(p.box is not None for p in parts):
            parts = [p.restrict(box) if p.box is None else p for p in parts]
        return join_components(ring, parts)
    nu = (0,) * n
    scalar = ring.one
    norm = []
    lows, highs = set(), set()
    for d, k in factors:
        v, a, s = normalize_unit(ring, d.terms, n)
        nu = tuple(x + k * y for x, y in zip(nu, v))
        scalar = ring.mul(scalar, ring.pow(a, k))
        lo, hg = classify(ring, s)
        lows.update(lo)
        highs.update(hg)
        norm.append((s, k))
    sinv = ring.inv(scalar)
    shift = tuple(-x for x in nu)
    if not highs:
        out = num
        for s, k in norm:
            if s:
                inv = IteratedSeries(ring, n, _geometric_exact(ring, s, n))
                for _ in range(k):
                    out = out * inv
        return out.shift(shift).scale(RingValue(ring, sinv))
    budget = ring.nil_bound - 1
    reach = Reach(n, sorted(lows), sorted(highs), budget)
    region = tuple((lo + v, hi + v) for (lo, hi), v in zip(box, nu))
    hi = tuple(h for _, h in region)
    states = {(e, 0): c for e, c in num.terms.items()}
    for s, k in norm:
        neg_s = {e: ring.neg(c) for e, c in s.items()}
        lowset = {e for e, c in s.items() if ring.is_nilpotent_fast(c)}
        for _ in range(k):
            states = _expand(ring, n, states, neg_s, lowset, reach, hi, budget, cap)
    add, mul, zero = ring.add, ring.mul, ring.zero
    acc = {}
    for (e, _), c in states.items():
        if _in_box(e, region):
            acc[e] = add(acc.get(e, zero), c)
    terms = {_vsub(e, nu): mul(sinv, c) for e, c in acc.items() if c != zero}
    return IteratedSeries(ring, n, terms, box)


def quotient(num, den, box, cap=DEFAULT_EXPANSION_CAP):
    """Coefficients of num/den on ``box`` for exact num and exact unit den.

    Returns an exact series when the quotient is itself a Laurent polynomial
    (den a monomial unit times a factor with only nilpotent corrections),
    otherwise a series carrying ``box``.  Every stored coefficient is exact.
    """
    return quotient_factors(num, [(den, 1)], box, cap)


def quotient_coeff(num, den, target, cap=DEFAULT_EXPANSION_CAP):
    """The single coefficient of num/den at ``target`` as a RingValue."""
    target = tuple(target)
    q = quotient(num, den, tuple((x, x) for x in target), cap)
    return q.coeff(target) if q.box is not None else RingValue(q.ring, q.terms.get(target, q.ring.zero))


def invert_unit(f, box, cap=DEFAULT_EXPANSION_CAP):
    """f^{-1} on ``box`` (exact when f^{-1} is a Laurent polynomial)."""
    return quotient(IteratedSeries.const(f.ring, f.n, 1), f, box, cap)


def power_sum_quotient(num, x, weights, dens, box, cap=DEFAULT_EXPANSION_CAP):
    """sum_{k>=1} weights(k) * num * x^k / prod(dens) on ``box``.

    ``x`` must be exact with zero or nilpotent coefficients on non-positive
    exponents (a topologically nilpotent element); ``weights(k)`` returns a
    raw ring value.  Used for logarithms.  Connected rings only.
    """
    ring = num.ring
    n = num.n
    if isinstance(dens, IteratedSeries):
        dens = [dens]
    nu = (0,) * n
    lows, highs = classify(ring, x.terms)
    for d in dens:
        v, _, s = normalize_unit(ring, d.terms, n)
        nu = tuple(a + b for a, b in zip(nu, v))
        sl, sh = classify(ring, s)
        lows += sl
        highs += sh
    reach = Reach(n, lows, highs, ring.nil_bound - 1)
    hi = tuple(h + v for (_, h), v in zip(box, nu))
    total = IteratedSeries(ring, n, {}, box)
    factors = [(d, 1) for d in dens]
    P = dict(num.terms)
    for k in range(1, cap + 1):
        P = _mul_terms(ring, P, x.terms)
        P = {e: c for e, c in P.items() if reach.ok(e, hi)}
        if not P:
            return total
        part = quotient_factors(IteratedSeries(ring, n, P), factors, box, cap)
        total = total + part.scale(RingValue(ring, weights(k))).restrict(box)
    raise PrecisionExhausted("power sum did not terminate")
