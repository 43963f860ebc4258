"""Arithmetic modulo monomials that can no longer reach a target.

Elements are dicts mapping (exponent, nilpotent factors used) to raw
coefficients.  Every exponent is a sum of generator vectors; a state is kept
only while ``Reach`` says further generators could still bring it down to
``hi`` within the remaining nilpotency budget.  Dropped states form an ideal,
so sums, products and inverses computed here agree with the true ones on
everything that can influence exponents <= ``hi``.
"""
from __future__ import annotations

from bisect import bisect_right
from operator import add as _plus

from .errors import NotAUnit, PrecisionExhausted
from .series import Reach, is_lex_negative

ITERATION_CAP = 10000


class Truncation:
    def __init__(self, ring, n, lows, highs, hi=None):
        self.ring = ring
        self.n = n
        self.budget = ring.nil_bound - 1
        self.reach = Reach(n, lows, highs, self.budget)
        self.hi = (0,) * n if hi is None else tuple(hi)
        self.zero_e = (0,) * n
        self._ok = {}

    def ok(self, e, used):
        key = (e, used)
        hit = self._ok.get(key)
        if hit is None:
            hit = used <= self.budget and self.reach.ok(e, self.hi, self.budget - used)
            self._ok[key] = hit
        return hit

    def const(self, c):
        return {} if c == self.ring.zero else {(self.zero_e, 0): c}

    def generator(self, v, c, cost):
        return {(v, cost): c} if self.ok(v, cost) and c != self.ring.zero else {}

    def add(self, x, y):
        add, zero = self.ring.add, self.ring.zero
        out = dict(x)
        for k, c in y.items():
            out[k] = add(out.get(k, zero), c)
        return {k: c for k, c in out.items() if c != zero}

    def scale(self, x, c):
        mul, zero = self.ring.mul, self.ring.zero
        out = {k: mul(c, v) for k, v in x.items()}
        return {k: v for k, v in out.items() if v != zero}

    def mul(self, x, y):
        add, mul, zero = self.ring.add, self.ring.mul, self.ring.zero
        ok = self.ok
        seen = self._ok
        budget = self.budget
        # the last coordinate alone bounds e2[-1]; scan only that prefix
        top = self.hi[-1]
        lowtop = self.reach.lowunit[-1]
        groups = {}
        for (e2, u2), c2 in y.items():
            groups.setdefault(u2, []).append((e2[-1], e2, c2))
        for g in groups.values():
            g.sort(key=lambda item: item[0])
        lasts = {u2: [item[0] for item in g] for u2, g in groups.items()}
        out = {}
        for (e1, u1), c1 in x.items():
            for u2, g in groups.items():
                u = u1 + u2
                if u > budget:
                    continue
                stop = bisect_right(lasts[u2], top - e1[-1] + (budget - u) * lowtop)
                for i in range(stop):
                    e2, c2 = g[i][1], g[i][2]
                    e = tuple(map(_plus, e1, e2))
                    hit = seen.get((e, u))
                    if hit is None:
                        hit = ok(e, u)
                    if not hit:
                        continue
                    p = mul(c1, c2)
                    if p != zero:
                        key = (e, u)
                        out[key] = add(out.get(key, zero), p)
        return {k: c for k, c in out.items() if c != zero}

    def inv(self, x):
        """Inverse of c * (1 + y) with c the coefficient of the (0, 0) state."""
        ring = self.ring
        c = x.get((self.zero_e, 0))
        cinv = None if c is None else ring.inv(c)
        if cinv is None:
            raise NotAUnit("truncated element has no unit constant state")
        y = {k: ring.neg(ring.mul(cinv, v)) for k, v in x.items() if k != (self.zero_e, 0)}
        total = {(self.zero_e, 0): ring.one}
        term = dict(total)
        for _ in range(ITERATION_CAP):
            term = self.mul(term, y)
            if not term:
                return self.scale(total, cinv)
            total = self.add(total, term)
        raise PrecisionExhausted("truncated inverse did not terminate")

    def power(self, x, k, cache=None):
        if k < 0:
            return self.power(self.inv(x), -k)
        out = self.const(self.ring.one)
        base = x
        while k:
            if k & 1:
                out = self.mul(out, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return out

    def pi(self, x):
        """pi of a unit with nu = 0, peeling V- factors inside the truncation."""
        ring = self.ring
        zero_e = self.zero_e

        def const(y):
            total = ring.zero
            for (e, _), c in y.items():
                if e == zero_e:
                    total = ring.add(total, c)
            return total

        a = const(x)
        ainv = ring.inv(a)
        if ainv is None:
            raise NotAUnit("constant part is not a unit")
        u = self.scale(x, ainv)
        for _ in range(ITERATION_CAP):
            w = {k: c for k, c in u.items() if is_lex_negative(k[0])}
            if not w:
                return ring.mul(a, const(u))
            for c in w.values():
                if not ring.is_nilpotent_fast(c):
                    raise NotAUnit("non-nilpotent coefficient below the leading term")
            # 1 - w has pi = 1 and cancels w to first order
            minus = {k: ring.neg(c) for k, c in w.items()}
            u = self.mul(u, self.add(self.const(ring.one), minus))
        raise PrecisionExhausted("V- peeling did not terminate")

    def collapse(self, x):
        """Forget the budget bookkeeping: exponent -> coefficient."""
        add, zero = self.ring.add, self.ring.zero
        out = {}
        for (e, _), c in x.items():
            out[e] = add(out.get(e, zero), c)
        return {e: c for e, c in out.items() if c != zero}
