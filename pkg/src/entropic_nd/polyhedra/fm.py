"""Fourier-Motzkin projection of cones with LP-based redundancy removal.

Rows are primitive integer vectors ``a`` meaning ``a.h >= 0``. All cone
algebra is exact. Redundancy is decided per row by a floating-point LP that
proposes either a separating point (row kept) or nonnegative multipliers
expressing the row through the others (row dropped); every proposal is then
re-checked in exact arithmetic, and anything that fails the exact check is
settled by the rational simplex in :mod:`.lp`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import linprog

from ..scenario import IndexMismatch, SubsetIndex
from . import lp
from .cone import DERIVED, Cone, LinearInequality

log = logging.getLogger(__name__)

DEFAULT_MAX_INEQUALITIES = 200_000
_MARGIN = 1e-7


class ProjectionLimitExceeded(RuntimeError):
    """Raised when an elimination step would exceed the inequality cap."""

    def __init__(self, step: int, coordinate: str, count: int, cap: int):
        super().__init__(
            f"elimination step {step} ({coordinate}) needs {count} inequalities, cap is {cap}")
        self.step, self.coordinate, self.count, self.cap = step, coordinate, count, cap


@dataclass
class StepInfo:
    step: int
    coordinate: str
    zero: int
    positive: int
    negative: int
    generated: int
    kept: int


def _primitive(vec) -> tuple[int, ...]:
    g = 0
    for v in vec:
        g = math.gcd(g, v)
    if g <= 1:
        return tuple(vec)
    return tuple(v // g for v in vec)


def _combine(p, n, j) -> tuple[int, ...]:
    a, b = p[j], -n[j]
    g = math.gcd(a, b)
    a, b = a // g, b // g
    return _primitive([b * x + a * y for x, y in zip(p, n)])


def _split(rows, j):
    z, p, n = [], [], []
    for r in rows:
        c = r[0][j]
        (z if c == 0 else p if c > 0 else n).append(r)
    return z, p, n


# -- redundancy ---------------------------------------------------------------

def _to_int_point(x: np.ndarray) -> list[int]:
    """Scale a float vector exactly to integers (common power-of-two denominator)."""
    ratios = [float(v).as_integer_ratio() for v in x]
    den = max(d for _, d in ratios)
    return [n * (den // d) for n, d in ratios]


def _exact_redundant(row, others) -> bool:
    """Is ``row`` a nonnegative combination of ``others``? Exact simplex."""
    if not others:
        return False
    d = len(row)
    A_eq = [[o[k] for o in others] for k in range(d)]
    res = lp.solve([0] * len(others), A_eq=A_eq, b_eq=list(row))
    return res.success


def _verify_multipliers(row, others, lam: np.ndarray) -> bool:
    support = [i for i, v in enumerate(lam) if v > 1e-10]
    if not support:
        return all(v == 0 for v in row)
    cols = [others[i] for i in support]
    sol = _solve_exact(cols, row)
    return sol is not None and all(v >= 0 for v in sol)


def _solve_exact(cols, rhs):
    """Solve ``sum_k x_k cols[k] = rhs`` exactly; None if inconsistent or not unique."""
    m, n = len(rhs), len(cols)
    M = [[Fraction(cols[k][i]) for k in range(n)] + [Fraction(rhs[i])] for i in range(m)]
    piv_cols, r = [], 0
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if M[i][n] != 0:
            return None
    if len(piv_cols) < n:
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        x[c] = M[i][n]
    return x


def is_redundant(row: Sequence[int], others: Sequence[Sequence[int]], active: Sequence[int] | None = None) -> bool:
    """Decide whether ``row.h >= 0`` is implied by ``others`` (exactly certified)."""
    if active is None:
        active = range(len(row))
    active = list(active)
    row = [row[k] for k in active]
    others = [[o[k] for k in active] for o in others]
    if not any(row):
        return True
    if not others:
        return False
    d = len(row)
    R = np.array(others, dtype=float)
    a = np.array(row, dtype=float)
    rn = np.linalg.norm(R, axis=1)
    rn[rn == 0] = 1.0
    an = np.linalg.norm(a)
    # variables (x_1..x_d, s): maximize s
    A_ub = np.zeros((len(others) + 1, d + 1))
    A_ub[:-1, :d] = -R
    A_ub[:-1, d] = rn
    A_ub[-1, :d] = a
    A_ub[-1, d] = an
    c = np.zeros(d + 1)
    c[d] = -1.0
    bounds = [(-1.0, 1.0)] * d + [(0.0, 1.0)]
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(len(others) + 1), bounds=bounds, method="highs")
    if res.status == 0 and -res.fun > _MARGIN:
        x = _to_int_point(res.x[:d])
        if (sum(u * v for u, v in zip(row, x)) < 0
                and all(sum(u * v for u, v in zip(o, x)) >= 0 for o in others)):
            return False
        return _exact_redundant(row, others)
    res = linprog(np.ones(len(others)), A_eq=R.T, b_eq=a, bounds=(0, None), method="highs")
    if res.status == 0 and _verify_multipliers(row, others, res.x):
        return True
    return _exact_redundant(row, others)


def _remove_redundant_rows(rows, active, protect: int = 0):
    """Drop redundant rows one at a time. ``rows`` are (coeffs, history) pairs."""
    keep = list(rows)
    i = len(keep) - 1
    while i >= 0:
        others = [r[0] for k, r in enumerate(keep) if k != i]
        if is_redundant(keep[i][0], others, active):
            keep.pop(i)
        i -= 1
    return keep


def remove_redundant(cone: Cone) -> Cone:
    """Minimal subset of the cone's inequalities describing the same cone."""
    rows = [(q.coeffs, p) for q, p in zip(cone.inequalities, cone.provenance)]
    keep = _remove_redundant_rows(rows, range(len(cone.index)))
    return Cone(cone.index, [LinearInequality(cone.index, r) for r, _ in keep],
                [p for _, p in keep])


# -- elimination --------------------------------------------------------------

def _eliminate_rows(rows, j, step):
    z, p, n = _split(rows, j)
    out = {r[0]: r[1] for r in z}
    for pr in p:
        for nr in n:
            hist = pr[1] | nr[1]
            if step is not None and bin(hist).count("1") > step + 1:
                continue  # Chernikov: combination of too many originals is redundant
            v = _combine(pr[0], nr[0], j)
            if any(v) and v not in out:
                out[v] = hist
    return list(out.items())


def fm_eliminate(cone: Cone, coordinate) -> Cone:
    """Project out one coordinate (no redundancy removal)."""
    j = cone.index.position(coordinate)
    rows = [(q.coeffs, 1 << k) for k, q in enumerate(cone.inequalities)]
    out = _eliminate_rows(rows, j, None)
    target = SubsetIndex(cone.index.labels,
                         tuple(s for k, s in enumerate(cone.index.subsets) if k != j))
    prov_of = {q.coeffs: p for q, p in zip(cone.inequalities, cone.provenance)}
    ineqs, prov = [], []
    for v, _ in out:
        w = tuple(c for k, c in enumerate(v) if k != j)
        if not any(w):
            continue
        ineqs.append(LinearInequality(target, w))
        prov.append(prov_of.get(v, DERIVED))
    return Cone(target, ineqs, prov)


def project_cone(cone: Cone, target: SubsetIndex, *,
                 max_inequalities: int = DEFAULT_MAX_INEQUALITIES,
                 progress: Callable[[StepInfo], None] | None = None) -> Cone:
    """Project ``cone`` onto the coordinates of ``target``.

    Eliminates every non-target coordinate by Fourier-Motzkin, choosing at each
    step the coordinate with the fewest positive-times-negative pairs and
    removing redundant inequalities after every step. The result is the
    irredundant description of the projection.
    """
    if not target.is_subindex_of(cone.index):
        raise IndexMismatch("target coordinates must be a subset of the cone's")
    keep_pos = [cone.index.position(s) for s in target.subsets]
    todo = [k for k in range(len(cone.index)) if k not in set(keep_pos)]
    rows = [(q.coeffs, 1 << k) for k, q in enumerate(cone.inequalities)]
    originals = {q.coeffs: p for q, p in zip(cone.inequalities, cone.provenance)}
    active = set(range(len(cone.index)))

    step = 0
    while todo:
        counts = []
        for j in todo:
            _, p, n = _split(rows, j)
            counts.append((len(p) * len(n), j))
        pn, j = min(counts)
        z, p, n = _split(rows, j)
        name = cone.index.key(cone.index.subsets[j])
        if len(z) + pn > max_inequalities:
            raise ProjectionLimitExceeded(step + 1, name, len(z) + pn, max_inequalities)
        step += 1
        new = _eliminate_rows(rows, j, step)
        active.discard(j)
        todo.remove(j)
        generated = len(new)
        rows = _remove_redundant_rows(new, sorted(active))
        info = StepInfo(step, name, len(z), len(p), len(n), generated, len(rows))
        log.info("step %d: eliminate H(%s) z=%d p=%d n=%d -> %d generated, %d kept",
                 step, name, len(z), len(p), len(n), generated, len(rows))
        if progress is not None:
            progress(info)

    ineqs, prov = [], []
    for v, _ in rows:
        w = [v[k] for k in keep_pos]
        if not any(w):
            continue
        ineqs.append(LinearInequality(target, tuple(w)))
        prov.append(originals.get(v, DERIVED))
    if not todo and step == 0:
        # nothing eliminated: still return an irredundant description
        return remove_redundant(Cone(target, ineqs, prov)).sorted()
    return Cone(target, ineqs, prov).sorted()
