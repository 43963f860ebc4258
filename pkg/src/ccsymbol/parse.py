"""Text front end: ring specs and series expressions.

Ring specs::

    Z   Q   Z/<m>   GF(<p>)   <base>[e1,...,ek]/(e1^d1,...,ek^dk)   <spec> x <spec>

Series are signed sums of products of numbers, variables ``t1..tn`` (any
integer exponent), ring generators and parenthesized sums.  Over a product
ring a bracketed list ``[c1, c2, ...]`` gives one coefficient per factor.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .errors import BadCoefficient, ParseError, UnknownVariable, UnsupportedRing
from .rings import Integers, IntegersMod, LocalExtension, PrimeField, Product, Rationals, RingValue
from .series import IteratedSeries

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class _Tokens:
    def __init__(self, text):
        self.text = text
        self.items = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m.group(0).strip() == "":
                break
            start = m.start(m.lastindex)
            kind = {1: "num", 2: "name", 3: "sym"}[m.lastindex]
            self.items.append((kind, m.group(m.lastindex), start))
            pos = m.end()
        self.i = 0

    @property
    def pos(self):
        return self.items[self.i][2] if self.i < len(self.items) else len(self.text)

    def peek(self, value=None):
        if self.i >= len(self.items):
            return None
        tok = self.items[self.i]
        if value is not None and tok[1] != value:
            return None
        return tok

    def take(self, value=None, kind=None, what=None):
        tok = self.peek()
        if tok is None or (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = what or repr(value) if value is not None else what or kind
            got = "end of input" if tok is None else repr(tok[1])
            raise ParseError(f"expected {want}, got {got}", self.pos)
        self.i += 1
        return tok

    def done(self):
        if self.i < len(self.items):
            raise ParseError(f"unexpected {self.items[self.i][1]!r}", self.pos)


def _int(tok, what):
    kind, value, pos = tok
    if kind != "num":
        raise ParseError(f"expected {what}, got {value!r}", pos)
    return int(value)


def _base_ring(tk):
    kind, value, pos = tk.take(kind="name", what="a ring")
    if value == "Q":
        return Rationals()
    if value == "GF":
        tk.take("(")
        p = _int(tk.take(what="a prime"), "a prime")
        tk.take(")")
        try:
            return PrimeField(p)
        except UnsupportedRing as exc:
            raise UnsupportedRing(f"{exc} (at position {pos})") from None
    if value == "Z":
        if tk.peek("/"):
            tk.take("/")
            m = _int(tk.take(what="a modulus"), "a modulus")
            try:
                return IntegersMod(m)
            except UnsupportedRing as exc:
                raise UnsupportedRing(f"{exc} (at position {pos})") from None
        return Integers()
    raise ParseError(f"unknown ring {value!r}", pos)


def _extension(tk, base):
    tk.take("[")
    names = [tk.take(kind="name", what="a generator name")[1]]
    while tk.peek(","):
        tk.take(",")
        names.append(tk.take(kind="name", what="a generator name")[1])
    tk.take("]")
    if len(set(names)) != len(names):
        raise ParseError("repeated generator name", tk.pos)
    tk.take("/")
    tk.take("(")
    degrees = {}
    while True:
        kind, name, pos = tk.take(kind="name", what="a generator power")
        if name not in names:
            raise ParseError(f"{name!r} is not a declared generator", pos)
        if name in degrees:
            raise ParseError(f"second relation for {name!r}", pos)
        tk.take("^")
        degrees[name] = _int(tk.take(what="an exponent"), "an exponent")
        if not tk.peek(","):
            break
        tk.take(",")
    tk.take(")")
    missing = [x for x in names if x not in degrees]
    if missing:
        raise ParseError(f"no relation for {missing[0]!r}", tk.pos)
    return LocalExtension(base, tuple(names), tuple(degrees[x] for x in names))


def _connected_ring(tk):
    ring = _base_ring(tk)
    if tk.peek("["):
        ring = _extension(tk, ring)
    return ring


def parse_ring(text):
    """Ring from its spec string, e.g. ``Z/4``, ``Q[e]/(e^3)``, ``Z/4 x GF(5)``."""
    tk = _Tokens(text)
    factors = [_connected_ring(tk)]
    while tk.peek("x"):
        tk.take("x")
        factors.append(_connected_ring(tk))
    tk.done()
    return factors[0] if len(factors) == 1 else Product(factors)


_VARIABLE = re.compile(r"t(\d+)$")


class _SeriesParser:
    def __init__(self, text, n, ring):
        self.tk = _Tokens(text)
        self.n = n
        self.ring = ring

    def const(self, c):
        return IteratedSeries.const(self.ring, self.n, c)

    def expr(self):
        tk = self.tk
        sign = 1
        if tk.peek("+") or tk.peek("-"):
            sign = -1 if tk.take()[1] == "-" else 1
        total = self.term()
        if sign < 0:
            total = -total
        while tk.peek("+") or tk.peek("-"):
            op = tk.take()[1]
            t = self.term()
            total = total + t if op == "+" else total - t
        return total

    def term(self):
        value = self.power()
        while self.tk.peek("*"):
            self.tk.take("*")
            value = value * self.power()
        return value

    def power(self):
        tk = self.tk
        pos = tk.pos
        base = self.atom()
        if not tk.peek("^"):
            return base
        tk.take("^")
        neg = bool(tk.peek("-")) and tk.take("-")
        k = _int(tk.take(what="an exponent"), "an exponent")
        k = -k if neg else k
        if k < 0 and not (len(base.terms) == 1 and self.ring.inv(next(iter(base.terms.values()))) is not None):
            raise ParseError("negative exponents are only allowed on monomials", pos)
        return base ** k

    def atom(self):
        tk = self.tk
        tok = tk.peek()
        if tok is None:
            raise ParseError("unexpected end of input", tk.pos)
        kind, value, pos = tok
        if kind == "num":
            tk.take()
            q = Fraction(int(value))
            if tk.peek("/"):
                tk.take("/")
                den = _int(tk.take(what="a denominator"), "a denominator")
                if den == 0:
                    raise BadCoefficient("zero denominator", pos)
                q = Fraction(int(value), den)
            try:
                raw = self.ring.from_fraction(q)
            except ValueError as exc:
                raise BadCoefficient(str(exc), pos) from None
            return self.const(RingValue(self.ring, raw))
        if kind == "name":
            tk.take()
            return self.name(value, pos)
        if value == "(":
            tk.take("(")
            inner = self.expr()
            tk.take(")")
            return inner
        if value == "[":
            return self.bracket()
        raise ParseError(f"unexpected {value!r}", pos)

    def name(self, value, pos):
        m = _VARIABLE.match(value)
        if m:
            i = int(m.group(1))
            if not 1 <= i <= self.n:
                raise UnknownVariable(f"{value} is not among t1..t{self.n}", pos)
            return IteratedSeries.variable(self.ring, self.n, i)
        ring = self.ring
        if isinstance(ring, Product):
            if any(value in getattr(f, "names", ()) for f in ring.factors):
                raise BadCoefficient(f"generator {value!r} needs a bracketed coefficient over a product ring", pos)
        elif value in getattr(ring, "names", ()):
            return self.const(RingValue(ring, ring.gen(value)))
        raise UnknownVariable(f"unknown name {value!r}", pos)

    def bracket(self):
        tk = self.tk
        pos = tk.pos
        ring = self.ring
        if not isinstance(ring, Product):
            raise BadCoefficient("bracketed coefficients need a product ring", pos)
        tk.take("[")
        raws = []
        for k, factor in enumerate(ring.factors):
            if k:
                tk.take(",")
            sub = _SeriesParser("", self.n, factor)
            sub.tk = tk
            start = tk.pos
            part = sub.expr()
            if any(any(e) for e in part.terms):
                raise BadCoefficient("bracketed coefficients must be constants", start)
            raws.append(part.terms.get((0,) * self.n, factor.zero))
        tk.take("]", what="']' after the last component")
        return self.const(RingValue(ring, tuple(raws)))


def parse_series(text, n, ring):
    """Exact series in t1..tn over ``ring`` from an expression like ``1 + 3*t1 + 2*e1*t1^-1*t2``."""
    if isinstance(ring, str):
        ring = parse_ring(ring)
    p = _SeriesParser(text, n, ring)
    if not p.tk.items:
        raise ParseError("empty series", 0)
    value = p.expr()
    p.tk.done()
    return value


def parse_vector(text, n=None):
    """Integer vector ``1,0,-2`` (optionally in parentheses)."""
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    out = []
    pos = 0
    for piece in body.split(","):
        try:
            out.append(int(piece))
        except ValueError:
            raise ParseError(f"not an integer: {piece.strip()!r}", pos) from None
        pos += len(piece) + 1
    if n is not None and len(out) != n:
        raise ParseError(f"expected {n} entries, got {len(out)}", 0)
    return tuple(out)
