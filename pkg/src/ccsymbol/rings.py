"""Exact coefficient rings with decidable unit and nilpotency tests.

Ring objects operate on *raw* values (ints, rationals, tuples) so that the
series code can run tight loops without wrapper overhead.  ``RingValue`` is
the public, immutable wrapper carrying its ring.
"""
from __future__ import annotations

import math
import operator
from fractions import Fraction
from functools import reduce
from itertools import product as iproduct

from gmpy2 import mpq

from .errors import MixedRings, UnsupportedRing


def _factorize(m):
    out = {}
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def _is_prime(p):
    return p >= 2 and _factorize(p) == {p: 1}


class Ring:
    """Base class.  Subclasses implement the raw-value protocol."""

    def __eq__(self, other):
        return isinstance(other, Ring) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Ring({self.spec()})"

    def __call__(self, x):
        if isinstance(x, RingValue):
            if x.ring != self:
                raise MixedRings(f"{x.ring.spec()} vs {self.spec()}")
            return x
        if isinstance(x, int):
            return RingValue(self, self.from_int(x))
        if isinstance(x, (Fraction, type(mpq()))):
            return RingValue(self, self.from_fraction(x))
        raise TypeError(f"cannot coerce {x!r} into {self.spec()}")

    # shared derived operations
    def neg(self, a):
        return self.sub(self.zero, a)

    def is_zero(self, a):
        return a == self.zero

    def pow(self, a, k):
        if k < 0:
            inv = self.inv(a)
            if inv is None:
                raise ZeroDivisionError(f"{self.fmt(a)} is not a unit in {self.spec()}")
            a, k = inv, -k
        result = self.one
        while k:
            if k & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            k >>= 1
        return result

    def scale(self, a, k):
        """Integer multiple k*a."""
        return self.mul(self.from_int(k), a)

    def is_nilpotent(self, a):
        return self.nil_index(a) is not None

    def nil_index(self, a):
        """Least k with a**k == 0, or None."""
        if not self.is_nilpotent_fast(a):
            return None
        k, p = 1, a
        while not self.is_zero(p):
            p = self.mul(p, a)
            k += 1
        return k

    @property
    def components(self):
        return (self,)

    @property
    def is_reduced(self):
        return self.nil_bound == 1

    @property
    def generators(self):
        return ()

    def gen(self, name):
        raise UnsupportedRing(f"{self.spec()} has no generator {name}")


class Integers(Ring):
    key = ("Z",)
    zero, one = 0, 1
    nil_bound = 1
    contains_q = False
    is_field = False

    def spec(self):
        return "Z"

    def from_int(self, k):
        return k

    def from_fraction(self, q):
        if q.denominator != 1:
            raise ValueError(f"{q} is not an integer")
        return q.numerator

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return a if a in (1, -1) else None

    def is_nilpotent_fast(self, a):
        return a == 0

    def fmt(self, a):
        return str(a)

    def scalar_terms(self, a):
        return [(Fraction(a), ())] if a else []


class Rationals(Ring):
    """Raw values are gmpy2 rationals (Fraction-compatible hashing and equality)."""

    key = ("Q",)
    zero, one = mpq(0), mpq(1)
    nil_bound = 1
    contains_q = True
    is_field = True

    def spec(self):
        return "Q"

    def from_int(self, k):
        return mpq(k)

    def from_fraction(self, q):
        return mpq(q)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return 1 / a if a else None

    def is_nilpotent_fast(self, a):
        return a == 0

    def fmt(self, a):
        return str(a)

    def scalar_terms(self, a):
        return [(Fraction(int(a.numerator), int(a.denominator)), ())] if a else []


class IntegersMod(Ring):
    contains_q = False

    def __init__(self, m):
        if m < 2:
            raise UnsupportedRing("modulus must be at least 2")
        self.m = m
        self.key = ("Zmod", m)
        self.zero, self.one = 0, 1
        fac = _factorize(m)
        self._rad = reduce(lambda x, y: x * y, fac, 1)
        self.nil_bound = max(fac.values())
        self.is_field = len(fac) == 1 and self.nil_bound == 1

    def spec(self):
        return f"Z/{self.m}"

    def from_int(self, k):
        return k % self.m

    def from_fraction(self, q):
        d = q.denominator % self.m
        if math.gcd(d, self.m) != 1:
            raise ValueError(f"{q} has a non-invertible denominator in {self.spec()}")
        return q.numerator * pow(d, -1, self.m) % self.m

    def add(self, a, b):
        return (a + b) % self.m

    def sub(self, a, b):
        return (a - b) % self.m

    def mul(self, a, b):
        return a * b % self.m

    def neg(self, a):
        return -a % self.m

    def inv(self, a):
        if math.gcd(a, self.m) != 1:
            return None
        return pow(a, -1, self.m)

    def is_nilpotent_fast(self, a):
        return a % self._rad == 0

    def fmt(self, a):
        return str(a)

    def scalar_terms(self, a):
        return [(Fraction(a), ())] if a else []


class PrimeField(IntegersMod):
    def __init__(self, p):
        if not _is_prime(p):
            raise UnsupportedRing(f"GF({p}): {p} is not prime")
        super().__init__(p)
        self.key = ("GF", p)

    def spec(self):
        return f"GF({self.m})"


class LocalExtension(Ring):
    """base[e_1..e_k] / (e_i^{d_i}), optionally also killing total degree >= total_degree.

    Raw values are dense tuples of base raws indexed in mixed radix.
    """

    def __init__(self, base, names, degrees, total_degree=None):
        if isinstance(base, Product):
            raise UnsupportedRing("base of an extension must be connected")
        if len(names) != len(degrees) or not names:
            raise UnsupportedRing("need one degree per generator")
        if any(d < 1 for d in degrees):
            raise UnsupportedRing("nilpotency degrees must be positive")
        self.base = base
        self.names = tuple(names)
        self.degrees = tuple(degrees)
        self.total_degree = total_degree
        self.key = ("Ext", base.key, self.names, self.degrees, total_degree)
        self._exps = [e for e in iproduct(*(range(d) for d in self.degrees))]
        self._index = {e: i for i, e in enumerate(self._exps)}
        size = len(self._exps)
        self._alive = [total_degree is None or sum(e) < total_degree for e in self._exps]
        table = []
        for i, ei in enumerate(self._exps):
            row = []
            for j, ej in enumerate(self._exps):
                s = tuple(a + b for a, b in zip(ei, ej))
                k = self._index.get(s)
                if k is not None and self._alive[k]:
                    row.append((j, k))
            table.append(row)
        self._table = table
        bz = base.zero
        self.zero = (bz,) * size
        self.one = (base.one,) + (bz,) * (size - 1)
        ext = sum(d - 1 for d in self.degrees)
        if total_degree is not None:
            ext = min(ext, total_degree - 1)
        self.nil_bound = base.nil_bound + ext
        self.contains_q = base.contains_q
        self.is_field = False
        # Q and Z raws support native + and *, which skips a call per operation
        self._native = isinstance(base, (Rationals, Integers))

    def spec(self):
        inner = self.base.spec()
        gens = ",".join(self.names)
        rels = ",".join(f"{n}^{d}" for n, d in zip(self.names, self.degrees))
        s = f"{inner}[{gens}]/({rels})"
        if self.total_degree is not None:
            s += f" deg<{self.total_degree}"
        return s

    @property
    def generators(self):
        return self.names + self.base.generators

    def gen(self, name):
        if name in self.names:
            i = self.names.index(name)
            e = tuple(1 if j == i else 0 for j in range(len(self.names)))
            out = list(self.zero)
            k = self._index.get(e)
            if k is not None and self._alive[k]:
                out[k] = self.base.one
            return tuple(out)
        return self.embed(self.base.gen(name))

    def embed(self, b):
        return (b,) + self.zero[1:]

    def constant(self, a):
        return a[0]

    def from_int(self, k):
        return self.embed(self.base.from_int(k))

    def from_fraction(self, q):
        return self.embed(self.base.from_fraction(q))

    def add(self, a, b):
        if self._native:
            return tuple(map(operator.add, a, b))
        ba = self.base.add
        return tuple(ba(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        if self._native:
            return tuple(map(operator.sub, a, b))
        bs = self.base.sub
        return tuple(bs(x, y) for x, y in zip(a, b))

    def neg(self, a):
        if self._native:
            return tuple(map(operator.neg, a))
        bn = self.base.neg
        return tuple(bn(x) for x in a)

    def mul(self, a, b):
        if self._native:
            out = list(self.zero)
            table = self._table
            for i, x in enumerate(a):
                if x:
                    for j, k in table[i]:
                        y = b[j]
                        if y:
                            out[k] += x * y
            return tuple(out)
        base = self.base
        bz = base.zero
        out = list(self.zero)
        bmul, badd = base.mul, base.add
        for i, x in enumerate(a):
            if x == bz:
                continue
            for j, k in self._table[i]:
                y = b[j]
                if y != bz:
                    out[k] = badd(out[k], bmul(x, y))
        return tuple(out)

    def inv(self, a):
        c = self.base.inv(a[0])
        if c is None:
            return None
        ci = self.embed(c)
        y = self.sub(self.mul(a, ci), self.one)
        my = self.neg(y)
        total, term = self.one, self.one
        while True:
            term = self.mul(term, my)
            if term == self.zero:
                break
            total = self.add(total, term)
        return self.mul(total, ci)

    def is_nilpotent_fast(self, a):
        return self.base.is_nilpotent_fast(a[0])

    def scalar_terms(self, a):
        out = []
        for e, x in zip(self._exps, a):
            if x == self.base.zero:
                continue
            gens = tuple((n, k) for n, k in zip(self.names, e) if k)
            for q, inner in self.base.scalar_terms(x):
                out.append((q, inner + gens))
        return out

    def fmt(self, a):
        return format_scalar_terms(self.scalar_terms(a))


class Product(Ring):
    """Flat finite product of connected rings; raw values are tuples."""

    def __init__(self, factors):
        factors = tuple(factors)
        if len(factors) < 2:
            raise UnsupportedRing("a product needs at least two factors")
        if any(isinstance(f, Product) for f in factors):
            raise UnsupportedRing("products must be flat")
        self.factors = factors
        self.key = ("Prod",) + tuple(f.key for f in factors)
        self.zero = tuple(f.zero for f in factors)
        self.one = tuple(f.one for f in factors)
        self.nil_bound = max(f.nil_bound for f in factors)
        self.contains_q = all(f.contains_q for f in factors)
        self.is_field = False

    def spec(self):
        return " x ".join(f.spec() for f in self.factors)

    @property
    def components(self):
        return self.factors

    @property
    def generators(self):
        common = set(self.factors[0].generators)
        for f in self.factors[1:]:
            common &= set(f.generators)
        return tuple(sorted(common))

    def gen(self, name):
        return tuple(f.gen(name) for f in self.factors)

    def from_int(self, k):
        return tuple(f.from_int(k) for f in self.factors)

    def from_fraction(self, q):
        return tuple(f.from_fraction(q) for f in self.factors)

    def add(self, a, b):
        return tuple(f.add(x, y) for f, x, y in zip(self.factors, a, b))

    def sub(self, a, b):
        return tuple(f.sub(x, y) for f, x, y in zip(self.factors, a, b))

    def neg(self, a):
        return tuple(f.neg(x) for f, x in zip(self.factors, a))

    def mul(self, a, b):
        return tuple(f.mul(x, y) for f, x, y in zip(self.factors, a, b))

    def inv(self, a):
        out = []
        for f, x in zip(self.factors, a):
            y = f.inv(x)
            if y is None:
                return None
            out.append(y)
        return tuple(out)

    def is_nilpotent_fast(self, a):
        return all(f.is_nilpotent_fast(x) for f, x in zip(self.factors, a))

    def nil_index(self, a):
        idx = [f.nil_index(x) for f, x in zip(self.factors, a)]
        if any(i is None for i in idx):
            return None
        return max(idx)

    def fmt(self, a):
        return "[" + ", ".join(f.fmt(x) for f, x in zip(self.factors, a)) + "]"


def format_scalar_terms(terms):
    """Render [(Fraction, ((gen, exp), ...)), ...] as ``2 - 1/3*e1*e2^2``."""
    if not terms:
        return "0"
    parts = []
    for q, gens in terms:
        mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in gens)
        mag = abs(q)
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        parts.append(("-" if q < 0 else "+", body))
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


class RingValue:
    """Immutable ring element in canonical form."""

    __slots__ = ("ring", "raw")

    def __init__(self, ring, raw):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "raw", raw)

    def __setattr__(self, name, value):
        raise AttributeError("RingValue is immutable")

    def _other(self, other):
        if isinstance(other, RingValue):
            if other.ring != self.ring:
                raise MixedRings(f"{self.ring.spec()} vs {other.ring.spec()}")
            return other.raw
        if isinstance(other, (int, Fraction, type(mpq()))):
            return self.ring(other).raw
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else RingValue(self.ring, self.ring.add(self.raw, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else RingValue(self.ring, self.ring.sub(self.raw, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else RingValue(self.ring, self.ring.sub(o, self.raw))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else RingValue(self.ring, self.ring.mul(self.raw, o))

    __rmul__ = __mul__

    def __neg__(self):
        return RingValue(self.ring, self.ring.neg(self.raw))

    def __pow__(self, k):
        return RingValue(self.ring, self.ring.pow(self.raw, k))

    def __eq__(self, other):
        if isinstance(other, RingValue):
            return self.ring == other.ring and self.raw == other.raw
        if isinstance(other, (int, Fraction, type(mpq()))):
            try:
                return self.raw == self.ring(other).raw
            except ValueError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.raw))

    def __repr__(self):
        return f"RingValue({self.ring.spec()}: {self})"

    def __str__(self):
        return self.ring.fmt(self.raw)

    def is_zero(self):
        return self.ring.is_zero(self.raw)

    def inverse(self):
        inv = self.ring.inv(self.raw)
        return None if inv is None else RingValue(self.ring, inv)

    def nilpotency_index(self):
        return self.ring.nil_index(self.raw)


def arith(a, b, op):
    """Ring operation by name: ``add``, ``sub`` or ``mul``."""
    if a.ring != b.ring:
        raise MixedRings(f"{a.ring.spec()} vs {b.ring.spec()}")
    return RingValue(a.ring, getattr(a.ring, op)(a.raw, b.raw))


def is_unit(a):
    """The inverse of ``a`` when it exists, else None."""
    return a.inverse()


def is_nilpotent(a):
    """Nilpotency index of ``a`` when nilpotent, else None."""
    return a.nilpotency_index()


def reduction_map(src, dst):
    """Raw-value map for the natural ring homomorphisms used in functoriality checks.

    Supported: Z -> anything, Z/m -> Z/d (d | m), an extension -> its base
    (generators to zero) or -> an extension with the same generators over a
    reducible base, a product -> one of its factors (use ``projection``).
    """
    if src == dst:
        return lambda a: a
    if isinstance(src, Integers):
        return dst.from_int
    if isinstance(src, IntegersMod) and isinstance(dst, IntegersMod):
        if src.m % dst.m:
            raise UnsupportedRing(f"no map {src.spec()} -> {dst.spec()}")
        return lambda a: a % dst.m
    if isinstance(src, LocalExtension):
        if isinstance(dst, LocalExtension) and dst.names == src.names and dst.degrees == src.degrees:
            inner = reduction_map(src.base, dst.base)
            return lambda a: tuple(inner(x) for x in a)
        inner = reduction_map(src.base, dst)
        return lambda a: inner(a[0])
    raise UnsupportedRing(f"no map {src.spec()} -> {dst.spec()}")


def projection(src, i):
    if not isinstance(src, Product):
        raise UnsupportedRing("projection needs a product ring")
    return lambda a: a[i]


def dual_numbers(base, name="eps"):
    """base[name]/(name^2)."""
    return LocalExtension(base, (name,), (2,))


class ZFunction:
    """Locally constant integer function on Spec(A): one integer per factor.

    Compares equal to a plain int when constant, so connected-ring callers
    can ignore the wrapper.
    """

    __slots__ = ("values",)

    def __init__(self, values):
        if isinstance(values, int):
            values = (values,)
        object.__setattr__(self, "values", tuple(int(v) for v in values))

    def __setattr__(self, name, value):
        raise AttributeError("ZFunction is immutable")

    @property
    def is_constant(self):
        return len(set(self.values)) == 1

    def __int__(self):
        if not self.is_constant:
            raise ValueError(f"{self} is not constant")
        return self.values[0]

    def _zip(self, other, op):
        if isinstance(other, int):
            other = ZFunction((other,) * len(self.values))
        if len(other.values) != len(self.values):
            raise MixedRings("ZFunctions over different component counts")
        return ZFunction(op(a, b) for a, b in zip(self.values, other.values))

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._zip(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return ZFunction(-v for v in self.values)

    def __eq__(self, other):
        if isinstance(other, int):
            return all(v == other for v in self.values)
        if isinstance(other, ZFunction):
            return self.values == other.values
        return NotImplemented

    def __hash__(self):
        return hash(self.values[0]) if self.is_constant else hash(self.values)

    def __repr__(self):
        return str(self.values[0]) if len(self.values) == 1 else f"ZFunction{self.values}"

    __str__ = __repr__
