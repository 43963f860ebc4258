"""Evaluators of the Contou-Carrere symbol CC_n.

``cc_tilde``       product of pairings over the (K, kappa) basis expansion
``cc_procedural``  reduction to monomial / valuation-zero arguments
``cc_q``           exp res(log f_1 dlog f_2 ^ ... ^ dlog f_{n+1}) over Q-algebras
``cc_eps``         1 + res(g dlog f_1 ^ ... ^ dlog f_n) eps over dual numbers
``tame``           the classical tame symbol for n = 1 over a field

All entry points accept n+1 exact unit series over a common ring; product
rings are split into their connected factors first.
"""
from __future__ import annotations

from fractions import Fraction

from .endo import int_det, pairing
from .errors import DimensionMismatch, MixedRings, NotAField, NotQAlgebra
from .exterior import exterior_coeffs, perm_parity, sgn
from .forms import jacobian, mixed_wedge, residue
from .rings import LocalExtension, Product, RingValue
from .series import IteratedSeries, power_sum_quotient, split_components
from .units import nu_vector, pi_raw


def _check_input(fs, count=None):
    fs = list(fs)
    if not fs:
        raise DimensionMismatch("no arguments")
    n = fs[0].n
    want = n + 1 if count is None else count
    if len(fs) != want:
        raise DimensionMismatch(f"expected {want} series in {n} variables, got {len(fs)}")
    for f in fs:
        if f.ring != fs[0].ring:
            raise MixedRings(f"{f.ring.spec()} vs {fs[0].ring.spec()}")
        if f.n != n:
            raise DimensionMismatch("arguments in different numbers of variables")
        if f.box is not None:
            raise DimensionMismatch("symbol arguments must be exact")
    return fs


def _per_component(fs, fn):
    """Apply ``fn`` (connected-ring raw evaluator) factorwise and join."""
    fs = _check_input(fs)
    ring = fs[0].ring
    cols = list(zip(*[split_components(f) for f in fs]))
    raws = [fn(list(c)) for c in cols]
    return RingValue(ring, tuple(raws) if isinstance(ring, Product) else raws[0])


def _var(ring, n, i):
    return IteratedSeries.variable(ring, n, i)


def _strip(f, v):
    return f.shift(tuple(-x for x in v))


def g_family(fs, kk):
    """g_(K, kappa): t_i f_{kappa(i)+1} t^{-nu(f_{kappa(i)+1})} for i in K, else t_i."""
    fs = list(fs)
    ring, n = fs[0].ring, fs[0].n
    out = []
    for i in range(1, n + 1):
        t = _var(ring, n, i)
        if i in kk.K:
            f = fs[kk.image(i)]
            out.append(t * _strip(f, nu_vector(f)))
        else:
            out.append(t)
    return out


def _pair(ring, f1, gs, cache):
    key = (f1, tuple(gs))
    hit = cache.get(key)
    if hit is None:
        if all(len(g.terms) == 1 and g.terms.get(tuple(int(j == i) for j in range(g.n))) == ring.one
               for i, g in enumerate(gs)):
            hit = pi_raw(f1)
        else:
            hit = pairing(f1, gs).raw
        cache[key] = hit
    return hit


def _tilde_raw(fs):
    ring = fs[0].ring
    nus = [nu_vector(f) for f in fs]
    value = ring.neg(ring.one) if sgn(nus) else ring.one
    cache = {}
    for kk, c in sorted(exterior_coeffs(nus[1:]).items()):
        p = _pair(ring, fs[0], g_family(fs, kk), cache)
        value = ring.mul(value, ring.pow(p, c))
    return value


def cc_tilde(fs, box=None):
    """(-1)^sgn * prod over (K, kappa) of <f_1, g_(K, kappa)>^C(K, kappa)."""
    return _per_component(fs, _tilde_raw)


# ---------------------------------------------------------------------------
# procedural evaluation


def _base_case(ring, f1, args, cache):
    """Base case: args = (t_p1, ..., t_pm, u_{m+1}, ..., u_n), p increasing, nu(u) = 0."""
    n = f1.n
    ps = [a for a in args if isinstance(a, int)]
    us = [a for a in args if not isinstance(a, int)]
    m = len(ps)
    qs = [i for i in range(1, n + 1) if i not in ps]
    sigma = perm_parity(ps + qs)
    nus = [nu_vector(f1)] + [tuple(int(j == p - 1) for j in range(n)) for p in ps] + [(0,) * n] * len(us)
    value = ring.neg(ring.one) if sgn(nus) else ring.one
    for k in range(len(qs) + 1):
        for K in _subsets(qs, k):
            gs = []
            for i in range(1, n + 1):
                t = _var(ring, n, i)
                gs.append(t * us[qs.index(i)] if i in K else t)
            p = _pair(ring, f1, gs, cache)
            e = -1 if (k + sigma + n - m) % 2 else 1
            value = ring.mul(value, ring.pow(p, e))
    return value


def _subsets(items, k):
    from itertools import combinations
    return combinations(items, k)


def _arg_nu(a, n):
    if isinstance(a, int):
        return tuple(int(j == a - 1) for j in range(n))
    return (0,) * n


def _reduced(ring, args, cache):
    """CC of a tuple whose entries are variable indices or valuation-zero series."""
    n = len(args) - 1
    for j in range(1, len(args)):
        for i in range(j):
            if args[i] == args[j]:
                cols = [_arg_nu(a, n) for k, a in enumerate(args) if k != j]
                return ring.neg(ring.one) if int_det(cols) % 2 else ring.one
    head = args[0]
    rest = list(args[1:])
    order = sorted(range(n), key=lambda k: (0, rest[k]) if isinstance(rest[k], int) else (1, k))
    parity = perm_parity(order)
    f1 = _var(ring, n, head) if isinstance(head, int) else head
    value = _base_case(ring, f1, [rest[k] for k in order], cache)
    return ring.inv(value) if parity else value


def _procedural_raw(fs):
    ring = fs[0].ring
    slots = []
    for f in fs:
        v = nu_vector(f)
        u = _strip(f, v)
        opts = [(u, 1)] + [(k + 1, x) for k, x in enumerate(v) if x]
        slots.append(opts)
    cache = {}
    value = ring.one
    from itertools import product as iproduct
    for combo in iproduct(*slots):
        e = 1
        for _, x in combo:
            e *= x
        args = [a for a, _ in combo]
        value = ring.mul(value, ring.pow(_reduced(ring, args, cache), e))
    return value


def cc_procedural(fs, box=None):
    """Split by valuation, expand multilinearly, resolve repeats, then the base case."""
    return _per_component(fs, _procedural_raw)


# ---------------------------------------------------------------------------
# Q-algebra evaluation


def _exp_nilpotent(ring, a):
    if not ring.is_nilpotent_fast(a):
        raise NotQAlgebra("exp applied to a non-nilpotent element")
    total, term, k = ring.one, ring.one, 0
    while True:
        k += 1
        term = ring.mul(term, ring.mul(a, ring.from_fraction(Fraction(1, k))))
        if term == ring.zero:
            return total
        total = ring.add(total, term)


def _is_monomial(f):
    return len(f.terms) == 1 and next(iter(f.terms.values())) == f.ring.one


def _log_residue(s, rest):
    """res(log(s) dlog rest) for sharp exact s."""
    ring, n = s.ring, s.n
    x = s - 1
    target = (-1,) * n
    weights = lambda k: ring.from_fraction(Fraction((-1) ** (k + 1), k))
    q = power_sum_quotient(jacobian(rest), x, weights, rest, tuple((a, a) for a in target))
    return q.terms.get(target, ring.zero)


def _q_raw(args):
    ring = args[0].ring
    n = args[0].n
    j = next((k for k, f in enumerate(args) if not _is_monomial(f)), None)
    if j is None:
        return ring.neg(ring.one) if sgn([nu_vector(f) for f in args]) else ring.one
    args = list(args)
    if j:
        args[0], args[j] = args[j], args[0]
    f = args[0]
    v = nu_vector(f)
    u = _strip(f, v)
    c = pi_raw(u)
    s = u.scale(RingValue(ring, ring.inv(c)))
    rest = args[1:]
    mono = IteratedSeries.monomial(ring, n, v)
    value = _q_raw([mono] + rest)
    d = int_det([nu_vector(g) for g in rest])
    value = ring.mul(value, ring.pow(c, d))
    value = ring.mul(value, _exp_nilpotent(ring, _log_residue(s, rest)))
    return ring.inv(value) if j else value


def cc_q(fs, box=None):
    """Log/exp evaluation; the ring must contain Q."""
    fs = _check_input(fs)
    for r in fs[0].ring.components:
        if not r.contains_q:
            raise NotQAlgebra(f"{r.spec()} does not contain Q")
    return _per_component(fs, _q_raw)


# ---------------------------------------------------------------------------
# oracles


def dual_generator(ring):
    """Name of a square-zero generator of a dual-number extension."""
    if not isinstance(ring, LocalExtension):
        raise NotQAlgebra(f"{ring.spec()} is not a dual-number extension")
    for name, d in zip(ring.names, ring.degrees):
        if d == 2:
            return name
    raise NotQAlgebra(f"{ring.spec()} has no square-zero generator")


def cc_eps(g, fs, eps=None):
    """1 + res(g dlog f_1 ^ ... ^ dlog f_n) eps, all series over A[eps]."""
    fs = _check_input(fs, count=g.n)
    ring = g.ring
    eps = dual_generator(ring) if eps is None else eps
    r = residue(mixed_wedge(g, fs))
    return RingValue(ring, ring.one) + r * RingValue(ring, ring.gen(eps))


def tame(f, g):
    """(-1)^(ab) * (f^b / g^a)(0) with a = nu(f), b = nu(g); n = 1 over a field."""
    _check_input([f, g])
    ring = f.ring
    if f.n != 1:
        raise DimensionMismatch("the tame symbol needs n = 1")
    if not getattr(ring, "is_field", False):
        raise NotAField(f"{ring.spec()} is not a field")
    (a,), (b,) = nu_vector(f), nu_vector(g)
    lf, lg = f.terms[(a,)], g.terms[(b,)]
    value = ring.mul(ring.pow(lf, b), ring.pow(lg, -a))
    if (a * b) % 2:
        value = ring.neg(value)
    return RingValue(ring, value)


ENGINES = {
    "tilde": cc_tilde,
    "procedural": cc_procedural,
    "q": cc_q,
    "tame": lambda fs, box=None: tame(*fs),
}


def cc(fs, engine="tilde", box=None):
    try:
        fn = ENGINES[engine]
    except KeyError:
        raise ValueError(f"unknown engine {engine!r}") from None
    return fn(list(fs), box)
