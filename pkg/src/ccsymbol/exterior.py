"""sgn, the index pairs (K, kappa) and wedge expansions in Lambda^n L.

L is free of rank 2n on e_1..e_n, x_1..x_n.  Generators are numbered
0..n-1 for the e's and n..2n-1 for the x's; a standard wedge monomial is a
strictly increasing tuple of generator numbers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product as iproduct

from .errors import DimensionMismatch


def sgn(ls):
    """The multilinear symmetric Z/2-valued map on n+1 vectors of Z^n.

    Expanding every vector in the standard basis, a basis tuple contributes
    the parity of the determinant left after dropping one repeated entry,
    which is 1 exactly when the tuple hits every basis vector.
    """
    ls = [tuple(int(x) for x in l) for l in ls]
    if not ls:
        raise DimensionMismatch("sgn needs n+1 vectors")
    n = len(ls) - 1
    if any(len(l) != n for l in ls):
        raise DimensionMismatch(f"sgn needs {n + 1} vectors of length {n}")
    full = set(range(n))
    total = 0
    for js in iproduct(range(n), repeat=n + 1):
        if set(js) != full:
            continue
        prod = 1
        for l, j in zip(ls, js):
            prod *= l[j]
            if not prod % 2:
                break
        total += prod
    return total % 2


def perm_parity(seq):
    """Parity of the permutation that sorts ``seq`` (distinct entries)."""
    seq = list(seq)
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return inv % 2


@dataclass(frozen=True, order=True)
class KKappa:
    """K subset of {1..n} with an order-preserving injection kappa: K -> {1..n}."""

    K: tuple
    kappa: tuple

    def __post_init__(self):
        if len(self.K) != len(self.kappa):
            raise ValueError("K and kappa differ in size")
        if list(self.K) != sorted(set(self.K)) or list(self.kappa) != sorted(set(self.kappa)):
            raise ValueError("K and kappa(K) must be strictly increasing")

    def image(self, i):
        return self.kappa[self.K.index(i)]

    def __str__(self):
        if not self.K:
            return "()"
        return "(" + ", ".join(f"{k}->{v}" for k, v in zip(self.K, self.kappa)) + ")"


def kkappa_set(n):
    out = []
    for k in range(n + 1):
        for K in combinations(range(1, n + 1), k):
            for img in combinations(range(1, n + 1), k):
                out.append(KKappa(K, img))
    return out


@dataclass
class ExteriorVector:
    """Integer combination of standard wedge monomials in Lambda^n L."""

    n: int
    coeffs: dict = field(default_factory=dict)

    def add(self, mono, c):
        if c:
            v = self.coeffs.get(mono, 0) + c
            if v:
                self.coeffs[mono] = v
            else:
                self.coeffs.pop(mono, None)

    def __eq__(self, other):
        return isinstance(other, ExteriorVector) and self.n == other.n and self.coeffs == other.coeffs


def wedge(vectors, n):
    """Wedge of n vectors of L, each a dict generator -> int coefficient."""
    out = ExteriorVector(n)
    items = [list(v.items()) for v in vectors]
    for choice in iproduct(*items):
        gens = [g for g, _ in choice]
        if len(set(gens)) < len(gens):
            continue
        c = 1
        for _, a in choice:
            c *= a
        sign = -1 if perm_parity(gens) else 1
        out.add(tuple(sorted(gens)), sign * c)
    return out


def v_vector(kk, n):
    """v_(K, kappa) expanded in the standard basis."""
    return ExteriorVector(n, dict(_v_items(kk, n)))


@lru_cache(maxsize=None)
def _v_items(kk, n):
    vecs = []
    for i in range(1, n + 1):
        if i in kk.K:
            vecs.append({i - 1: 1, n + kk.image(i) - 1: 1})
        else:
            vecs.append({i - 1: 1})
    return tuple(wedge(vecs, n).coeffs.items())


def standard_to_v(mono, n):
    """Write e_p ^ x_r (standard monomial) in the v basis: {KKappa: int}."""
    return dict(_standard_to_v(tuple(mono), n))


@lru_cache(maxsize=None)
def _standard_to_v(mono, n):
    ps = [g + 1 for g in mono if g < n]
    rs = [g - n + 1 for g in mono if g >= n]
    m = len(ps)
    qs = [i for i in range(1, n + 1) if i not in ps]
    sigma = perm_parity(ps + qs)
    mu = dict(zip(qs, rs))
    base = (sigma + n - m) % 2
    out = {}
    for k in range(len(qs) + 1):
        for K in combinations(qs, k):
            sign = -1 if (base + k) % 2 else 1
            out[KKappa(K, tuple(mu[i] for i in K))] = sign
    return tuple(out.items())


def symbol_wedge(nus):
    """(e . nu_1 + x_1) ^ ... ^ (e . nu_n + x_n) in the standard basis."""
    n = len(nus)
    vecs = []
    for i, col in enumerate(nus):
        if len(col) != n:
            raise DimensionMismatch(f"column {col} has the wrong length")
        v = {j: int(a) for j, a in enumerate(col) if a}
        v[n + i] = 1
        vecs.append(v)
    return wedge(vecs, n)


def exterior_coeffs(nus):
    """C(K, kappa) with symbol_wedge(nus) = sum C(K, kappa) v_(K, kappa)."""
    n = len(nus)
    out = {}
    for mono, c in symbol_wedge(nus).coeffs.items():
        for kk, s in _standard_to_v(mono, n):
            out[kk] = out.get(kk, 0) + c * s
    return {kk: c for kk, c in out.items() if c}


def recombine(coeffs, n):
    """sum C(K, kappa) v_(K, kappa) back in the standard basis."""
    out = ExteriorVector(n)
    for kk, c in coeffs.items():
        for mono, a in _v_items(kk, n):
            out.add(mono, c * a)
    return out
