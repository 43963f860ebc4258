"""Top-degree forms in density representation and the residue map."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .errors import DimensionMismatch, PrecisionExhausted
from .series import IteratedSeries, derivative, make_box, quotient


@dataclass(frozen=True)
class TopForm:
    """density * dt_1 ^ ... ^ dt_n."""

    density: IteratedSeries

    @property
    def n(self):
        return self.density.n

    def __add__(self, other):
        return TopForm(self.density + other.density)

    def scale(self, c):
        return TopForm(self.density.scale(c))


def residue(w):
    """Coefficient of t^(-1,...,-1) in the density."""
    dens = w.density if isinstance(w, TopForm) else w
    return dens.coeff((-1,) * dens.n)


def _perm_sign(p):
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def jacobian(gs):
    """det(d g_i / d t_j) by the Leibniz expansion."""
    n = len(gs)
    if n == 0 or any(g.n != n for g in gs):
        raise DimensionMismatch("need n series in n variables")
    parts = [[derivative(g, j + 1) for j in range(n)] for g in gs]
    total = IteratedSeries(gs[0].ring, n)
    for p in permutations(range(n)):
        term = parts[0][p[0]]
        for i in range(1, n):
            if not term.terms:
                break
            term = term * parts[i][p[i]]
        if term.terms:
            total = total + term if _perm_sign(p) > 0 else total - term
    return total


def _product(fs):
    out = fs[0]
    for f in fs[1:]:
        out = out * f
    return out


def _target_box(n, box):
    box = make_box(n, 8) if box is None else box
    if any(not lo <= -1 <= hi for lo, hi in box):
        box = tuple((min(lo, -1), max(hi, -1)) for lo, hi in box)
    return box


def dlog_wedge(fs, box=None):
    """dlog f_1 ^ ... ^ dlog f_n, density J(f) / prod f_i, exact on ``box``."""
    n = len(fs)
    if any(f.box is not None for f in fs):
        raise PrecisionExhausted("dlog_wedge needs exact inputs")
    return TopForm(quotient(jacobian(fs), _product(fs), _target_box(n, box)))


def mixed_wedge(g, fs, box=None):
    """g * dlog f_1 ^ ... ^ dlog f_n."""
    n = len(fs)
    box = _target_box(n, box)
    if g.box is None:
        return TopForm(quotient(g * jacobian(fs), _product(fs), box))
    base = dlog_wedge(fs, None).density
    if base.box is not None:
        raise PrecisionExhausted("boxed g needs an exact dlog density")
    return TopForm((g * base).restrict(box))


def residue_of_quotient(num, den):
    """res(num / den * dt) without building the full density."""
    target = (-1,) * num.n
    return quotient(num, den, tuple((x, x) for x in target)).coeff(target)
