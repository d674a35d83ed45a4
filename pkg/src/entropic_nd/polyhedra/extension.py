"""Does an observed entropy vector extend to a full Shannon-cone vector?"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from ..scenario import EntropyVector, IndexMismatch, Scenario
from . import lp
from .cone import FLOAT_TOL, LinearInequality, elemental_terms


@dataclass(frozen=True)
class Extension:
    feasible: bool
    witness: EntropyVector | None = None
    certificate: LinearInequality | None = None   # valid inequality the data violates
    residual: float = 0.0

    def __bool__(self) -> bool:
        return self.feasible


def _elemental_matrix(scenario: Scenario):
    full = scenario.full_index
    rows = []
    for t in elemental_terms(scenario.labels):
        r = [0] * len(full)
        for s, c in t.items():
            r[full.position(s)] += c
        rows.append(r)
    return full, rows


def extension_feasible(observed: EntropyVector, scenario: Scenario, tol: float = FLOAT_TOL) -> Extension:
    """Search a Shannon-cone vector on all subsets that restricts to ``observed``.

    Exact inputs are decided by the rational simplex; an infeasible answer comes
    with a valid inequality on the observed coordinates that the data violates.
    Float inputs use a HiGHS LP minimising the largest elemental violation,
    feasible when it is at most ``tol``.
    """
    obs_index = scenario.observed_index
    if observed.index != obs_index:
        raise IndexMismatch("vector is not over the scenario's observed index")
    full, E = _elemental_matrix(scenario)
    obs_pos = [full.position(s) for s in obs_index]
    free_pos = [k for k in range(len(full)) if k not in set(obs_pos)]
    vals = dict(zip(obs_pos, observed.values))

    if observed.is_exact:
        return _exact(observed, scenario, full, E, obs_pos, free_pos, vals)

    Ef = np.array([[r[k] for k in free_pos] for r in E], dtype=float).reshape(len(E), len(free_pos))
    b = np.array([sum(r[k] * float(vals[k]) for k in obs_pos) for r in E])
    nfree = len(free_pos)
    # minimise t  s.t.  Ef h + b + t >= 0, h >= 0, t >= 0
    A_ub = np.hstack([-Ef, -np.ones((len(E), 1))])
    c = np.zeros(nfree + 1)
    c[-1] = 1.0
    res = linprog(c, A_ub=A_ub, b_ub=b, bounds=(0, None), method="highs")
    if res.status != 0:
        raise RuntimeError(f"extension LP failed: {res.message}")
    t = float(res.x[-1])
    if t > tol:
        return Extension(False, residual=t)
    h = [0.0] * len(full)
    for k in obs_pos:
        h[k] = float(vals[k])
    for k, v in zip(free_pos, res.x[:-1]):
        h[k] = max(float(v), 0.0)
    return Extension(True, witness=EntropyVector(full, tuple(h)), residual=t)


def _exact(observed, scenario, full, E, obs_pos, free_pos, vals) -> Extension:
    # elemental rows:  E_free h + E_obs v >= 0   <=>   -E_free h <= E_obs v
    A_ub = [[-r[k] for k in free_pos] for r in E]
    b_ub = [sum((r[k] * Fraction(vals[k]) for k in obs_pos), Fraction(0)) for r in E]
    res = lp.solve([0] * len(free_pos), A_ub, b_ub)
    if res.success:
        h = [Fraction(0)] * len(full)
        for k in obs_pos:
            h[k] = Fraction(vals[k])
        for k, v in zip(free_pos, res.x):
            h[k] = v
        return Extension(True, witness=EntropyVector(full, tuple(h)))
    y = res.farkas
    # g = sum_k y_k E_k has g_free <= 0, so g_obs . h_obs >= 0 holds on the projection
    g = [sum((y[i] * E[i][k] for i in range(len(E))), Fraction(0)) for k in obs_pos]
    cert = LinearInequality(observed.index, tuple(g))
    return Extension(False, certificate=cert)
