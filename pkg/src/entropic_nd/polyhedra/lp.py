"""Exact rational linear programming.

Dense two-phase tableau simplex over ``fractions.Fraction`` with Bland's
anti-cycling rule. Problems are stated as::

    maximize    c . x
    subject to  A_ub x <= b_ub
                A_eq x == b_eq
                x >= 0

Infeasible problems return a Farkas vector ``y`` over the rows as given
(``y >= 0`` on inequality rows, ``y . A >= 0`` and ``y . b < 0``); optimal
problems return the dual solution alongside the primal one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: list | None = None
    value: Fraction | None = None
    dual: list | None = None     # one entry per row: ub rows first, then eq rows
    farkas: list | None = None   # certificate of infeasibility, same row order
    pivots: int = 0

    @property
    def success(self) -> bool:
        return self.status == OPTIMAL


def _frac_matrix(rows) -> list[list[Fraction]]:
    return [[Fraction(v) for v in r] for r in rows]


class _Tableau:
    def __init__(self, A, b, nvars):
        # columns: structural + slacks (nvars) then one artificial per row
        m = len(A)
        self.m, self.n = m, nvars
        self.ncols = nvars + m
        self.rows = []
        for i in range(m):
            row = list(A[i]) + [Fraction(0)] * m
            row[nvars + i] = Fraction(1)
            self.rows.append(row)
        self.rhs = list(b)
        self.basis = [nvars + i for i in range(m)]
        self.pivots = 0

    def pivot(self, r: int, col: int, obj: list, obj_val: list):
        prow = self.rows[r]
        pv = prow[col]
        if pv != 1:
            inv = 1 / pv
            prow[:] = [v * inv for v in prow]
            self.rhs[r] *= inv
        nz = [j for j, v in enumerate(prow) if v]
        prhs = self.rhs[r]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[col]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
                self.rhs[i] -= f * prhs
        f = obj[col]
        if f:
            for j in nz:
                obj[j] -= f * prow[j]
            obj_val[0] += f * prhs
        self.basis[r] = col
        self.pivots += 1

    def run(self, obj: list, obj_val: list, allowed: int, max_pivots: int) -> str:
        """Maximize with reduced-cost row ``obj`` (entering when obj[j] > 0)."""
        while True:
            col = next((j for j in range(allowed) if obj[j] > 0), None)
            if col is None:
                return OPTIMAL
            best, r = None, None
            for i, row in enumerate(self.rows):
                a = row[col]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if (best is None or ratio < best
                            or (ratio == best and self.basis[i] < self.basis[r])):
                        best, r = ratio, i
            if r is None:
                return UNBOUNDED
            self.pivot(r, col, obj, obj_val)
            if self.pivots > max_pivots:
                raise RuntimeError("simplex pivot limit exceeded")


def solve(c: Sequence, A_ub: Sequence = (), b_ub: Sequence = (),
          A_eq: Sequence = (), b_eq: Sequence = (), *,
          max_pivots: int = 1_000_000) -> LPResult:
    """Solve the LP exactly; see the module docstring for the form."""
    c = [Fraction(v) for v in c]
    nx = len(c)
    A_ub, A_eq = _frac_matrix(A_ub), _frac_matrix(A_eq)
    b_ub, b_eq = [Fraction(v) for v in b_ub], [Fraction(v) for v in b_eq]
    if len(A_ub) != len(b_ub) or len(A_eq) != len(b_eq):
        raise ValueError("row count mismatch")
    for r in A_ub + A_eq:
        if len(r) != nx:
            raise ValueError("column count mismatch")

    n_ub = len(A_ub)
    nvars = nx + n_ub
    A, b, sign = [], [], []
    for i, r in enumerate(A_ub):
        row = r + [Fraction(0)] * n_ub
        row[nx + i] = Fraction(1)
        A.append(row)
        b.append(b_ub[i])
    for r, v in zip(A_eq, b_eq):
        A.append(r + [Fraction(0)] * n_ub)
        b.append(v)
    for i in range(len(A)):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]
            sign.append(-1)
        else:
            sign.append(1)
    m = len(A)
    tab = _Tableau(A, b, nvars)

    # phase 1: maximize -sum(artificials); reduced costs d_j = sum_i A_ij for structurals
    obj = [sum((row[j] for row in tab.rows), Fraction(0)) for j in range(nvars)] + [Fraction(0)] * m
    obj_val = [-sum(b, Fraction(0))]
    tab.run(obj, obj_val, nvars, max_pivots)
    if obj_val[0] < 0:
        # optimal phase-1 reduced costs give d_a = -1 - y for the Farkas vector y
        y = [sign[i] * (-1 - obj[nvars + i]) for i in range(m)]
        return LPResult(INFEASIBLE, farkas=y, pivots=tab.pivots)

    # drive artificials out of the basis where possible
    for r in range(m):
        if tab.basis[r] >= nvars:
            col = next((j for j in range(nvars) if tab.rows[r][j] != 0), None)
            if col is not None:
                tab.pivot(r, col, obj, obj_val)

    # phase 2
    cfull = c + [Fraction(0)] * (n_ub + m)
    obj2 = list(cfull)
    val2 = [Fraction(0)]
    for r, bv in enumerate(tab.basis):
        cb = cfull[bv]
        if cb:
            row = tab.rows[r]
            for j in range(len(obj2)):
                if row[j]:
                    obj2[j] -= cb * row[j]
            val2[0] += cb * tab.rhs[r]
    # artificial rows still basic are redundant (rhs zero); keep them out
    status = tab.run(obj2, val2, nvars, max_pivots)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, pivots=tab.pivots)
    x = [Fraction(0)] * (nvars + m)
    for r, bv in enumerate(tab.basis):
        x[bv] = tab.rhs[r]
    value = sum((ci * xi for ci, xi in zip(c, x[:nx])), Fraction(0))
    # duals: y_i = -(reduced cost of artificial i), undo row sign flips
    dual = [sign[i] * -obj2[nvars + i] for i in range(m)]
    return LPResult(OPTIMAL, x=x[:nx], value=value, dual=dual, pivots=tab.pivots)


def check_farkas(y, A_ub=(), b_ub=(), A_eq=(), b_eq=()) -> bool:
    """Verify an infeasibility certificate exactly.

    ``y`` must be nonnegative on the ``<=`` rows, satisfy ``y.A >= 0`` column-wise
    and ``y.b < 0``: then no ``x >= 0`` satisfies the system.
    """
    rows = list(A_ub) + list(A_eq)
    rhs = list(b_ub) + list(b_eq)
    n_ub = len(A_ub)
    if any(v < 0 for v in y[:n_ub]):
        return False
    ncols = len(rows[0]) if rows else 0
    for j in range(ncols):
        if sum((Fraction(y[i]) * Fraction(rows[i][j]) for i in range(len(rows))), Fraction(0)) < 0:
            return False
    return sum((Fraction(yi) * Fraction(bi) for yi, bi in zip(y, rhs)), Fraction(0)) < 0
