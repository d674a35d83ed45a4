"""Finite-dimensional quantum models of measurement scenarios.

Measurements are projective, given as projectors tagged by their position
(outcome 0, 1, ...). Compatible measurements must commute. Random and
optimized experiments use dichotomic rank-1 measurements ``{I - P, P}`` on a
tensor product of parties; within a party, each measurement vector is made
orthogonal to the earlier compatible ones, so compatible projectors commute
exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import minimize

from .distributions import shannon_entropy
from .inequalities import TestExpression, evaluate_expression, monogamy_sum
from .scenario import EntropyVector, Scenario

TOL = 1e-10


class NonCommuting(ValueError):
    pass


class MarginalMismatch(ValueError):
    pass


class InvalidGammas(ValueError):
    pass


def _check_projectors(label, projs, dim):
    eye = np.eye(dim)
    total = np.zeros((dim, dim), dtype=complex)
    for k, p in enumerate(projs):
        if p.shape != (dim, dim):
            raise ValueError(f"{label}: projector {k} has shape {p.shape}")
        if np.abs(p - p.conj().T).max() > TOL or np.abs(p @ p - p).max() > TOL:
            raise ValueError(f"{label}: element {k} is not an orthogonal projector")
        for j in range(k):
            if np.abs(projs[j] @ p).max() > TOL:
                raise ValueError(f"{label}: projectors {j} and {k} are not orthogonal")
        total = total + p
    if np.abs(total - eye).max() > TOL:
        raise ValueError(f"{label}: projectors do not sum to the identity")


def commute(p: Sequence[np.ndarray], q: Sequence[np.ndarray], tol: float = TOL) -> bool:
    return all(np.abs(a @ b - b @ a).max() <= tol for a in p for b in q)


@dataclass(frozen=True)
class QuantumExperiment:
    """Density matrix plus a projective measurement per label."""

    dim: int
    state: np.ndarray
    measurements: tuple          # (label, (projector, ...)) pairs
    scenario: Scenario | None = None

    def __post_init__(self):
        rho = np.asarray(self.state, dtype=complex)
        if rho.shape != (self.dim, self.dim):
            raise ValueError("state must be dim x dim")
        if np.abs(rho - rho.conj().T).max() > TOL:
            raise ValueError("state is not Hermitian")
        if abs(np.trace(rho) - 1) > TOL:
            raise ValueError("state does not have unit trace")
        if np.linalg.eigvalsh(rho).min() < -TOL:
            raise ValueError("state is not positive semidefinite")
        meas = tuple((str(lab), tuple(np.asarray(p, dtype=complex) for p in projs))
                     for lab, projs in (self.measurements.items()
                                        if isinstance(self.measurements, Mapping)
                                        else self.measurements))
        for lab, projs in meas:
            _check_projectors(lab, projs, self.dim)
        object.__setattr__(self, "state", rho)
        object.__setattr__(self, "measurements", meas)
        if self.scenario is not None:
            known = dict(meas)
            for lab in self.scenario.labels:
                if lab not in known:
                    raise ValueError(f"no measurement for label {lab}")
            for e in self.scenario.edges:
                u, v = sorted(e)
                if not commute(known[u], known[v]):
                    raise NonCommuting(f"compatible measurements {u} and {v} do not commute")

    @property
    def labels(self) -> tuple:
        return tuple(lab for lab, _ in self.measurements)

    def projectors(self, label) -> tuple:
        for lab, projs in self.measurements:
            if lab == label:
                return projs
        raise KeyError(label)

    def with_noise(self, lam: float) -> "QuantumExperiment":
        """Mix the state with the maximally mixed state (weight ``lam``)."""
        rho = (1 - lam) * self.state + lam * np.eye(self.dim) / self.dim
        return QuantumExperiment(self.dim, rho, self.measurements, self.scenario)

    def to_json(self) -> str:
        enc = lambda m: [[[float(z.real), float(z.imag)] for z in row] for row in m]  # noqa: E731
        data = {
            "dim": self.dim,
            "state": enc(self.state),
            "measurements": {lab: [enc(p) for p in projs] for lab, projs in self.measurements},
        }
        return json.dumps(data)

    @classmethod
    def from_json(cls, text: str, scenario: Scenario | None = None) -> "QuantumExperiment":
        data = json.loads(text)
        dec = lambda m: np.array([[complex(a, b) for a, b in row] for row in m])  # noqa: E731
        meas = {lab: [dec(p) for p in projs] for lab, projs in data["measurements"].items()}
        return cls(int(data["dim"]), dec(data["state"]), meas, scenario)


@dataclass(frozen=True)
class ProbabilityTable:
    context: tuple
    outcomes: tuple              # per label, the outcome values (0..k-1)
    probs: np.ndarray

    def marginal(self, labels) -> np.ndarray:
        axes = tuple(k for k, x in enumerate(self.context) if x not in set(labels))
        return self.probs.sum(axis=axes)

    def entropy(self, labels=None) -> float:
        return shannon_entropy(self.probs if labels is None else self.marginal(labels))


def joint_probability(experiment: QuantumExperiment, context, *,
                      check: bool = True) -> ProbabilityTable:
    """``p(a, b, ...) = Tr(rho P_a P_b ...)`` for pairwise commuting measurements."""
    ctx = tuple(context)
    fams = [experiment.projectors(x) for x in ctx]
    if check:
        for i in range(len(ctx)):
            for j in range(i + 1, len(ctx)):
                if not commute(fams[i], fams[j]):
                    raise NonCommuting(f"{ctx[i]} and {ctx[j]} do not commute")
    shape = tuple(len(f) for f in fams)
    probs = np.zeros(shape)
    rho = experiment.state
    for idx in product(*(range(n) for n in shape)):
        op = np.eye(experiment.dim, dtype=complex)
        for f, k in zip(fams, idx):
            op = op @ f[k]
        probs[idx] = float(np.real(np.trace(rho @ op)))
    if probs.min() < -1e-9:
        raise NonCommuting(f"negative joint probability {probs.min()} on {ctx}")
    probs = np.clip(probs, 0.0, None)
    if abs(probs.sum() - 1) > 1e-9:
        raise ValueError(f"table for {ctx} sums to {probs.sum()}")
    return ProbabilityTable(ctx, tuple(tuple(range(n)) for n in shape), probs / probs.sum())


def observed_entropy_vector(experiment: QuantumExperiment, scenario: Scenario) -> EntropyVector:
    """Entropies (bits) of every observed subset, from the context tables.

    Each subset's entropy is computed in every context containing it; the
    values must agree within 1e-9.
    """
    order = {x: i for i, x in enumerate(scenario.labels)}
    tables = [joint_probability(experiment, sorted(c, key=order.__getitem__))
              for c in scenario.contexts]
    index = scenario.observed_index
    vals = []
    for s in index:
        hs = [t.entropy(s) for t in tables if s <= set(t.context)]
        if max(hs) - min(hs) > 1e-9:
            raise MarginalMismatch(f"H({index.key(s)}) differs across contexts: {hs}")
        vals.append(max(hs[0], 0.0))
    return EntropyVector(index, tuple(vals))


def no_disturbance_gap(experiment: QuantumExperiment, scenario: Scenario) -> float:
    """Largest difference between marginals of shared labels across contexts."""
    order = {x: i for i, x in enumerate(scenario.labels)}
    tables = [joint_probability(experiment, sorted(c, key=order.__getitem__))
              for c in scenario.contexts]
    gap = 0.0
    for lab in scenario.labels:
        ms = [t.marginal([lab]) for t in tables if lab in t.context]
        for m in ms[1:]:
            gap = max(gap, float(np.abs(m - ms[0]).max()))
    return gap


def probabilistic_cycle_value(experiment: QuantumExperiment, cycle: Sequence[str],
                              gammas: Sequence[int]) -> float:
    """``sum_i gamma_i <A_i A_{i+1}>`` with outcomes 0/1 read as -1/+1.

    ``gammas`` must be +-1 with an odd number of -1 entries; the
    noncontextual bound is ``n - 2``.
    """
    n = len(cycle)
    if len(gammas) != n or any(g not in (1, -1) for g in gammas):
        raise InvalidGammas("need one gamma = +-1 per cycle edge")
    if sum(1 for g in gammas if g == -1) % 2 == 0:
        raise InvalidGammas("the number of -1 entries must be odd")
    total = 0.0
    for i in range(n):
        t = joint_probability(experiment, (cycle[i], cycle[(i + 1) % n]))
        if t.probs.shape != (2, 2):
            raise ValueError("probabilistic cycle test needs dichotomic measurements")
        sign = np.array([[1, -1], [-1, 1]])
        total += gammas[i] * float((sign * t.probs).sum())
    return total


# -- parameterized experiments ------------------------------------------------

def default_parties(labels: Sequence[str]) -> dict:
    """Party of a label: the label with trailing digits stripped."""
    return {x: x.rstrip("0123456789") or x for x in labels}


@dataclass(frozen=True)
class Layout:
    """How a scenario's labels sit on a tensor product of parties."""

    scenario: Scenario
    parties: tuple = ()          # (label, party) pairs
    dims: tuple = ()             # (party, dim) pairs, in tensor order

    @classmethod
    def build(cls, scenario: Scenario, parties: Mapping | None = None,
              dims: Mapping | int = 2) -> "Layout":
        pm = dict(parties) if parties is not None else default_parties(scenario.labels)
        names = []
        for x in scenario.labels:
            if pm[x] not in names:
                names.append(pm[x])
        dm = {p: dims for p in names} if isinstance(dims, int) else dict(dims)
        for a in scenario.labels:
            for b in scenario.labels:
                if a < b and pm[a] != pm[b] and not scenario.compatible(a, b):
                    raise ValueError(f"{a} and {b} sit on different parties but are "
                                     "not declared compatible")
        return cls(scenario, tuple((x, pm[x]) for x in scenario.labels),
                   tuple((p, int(dm[p])) for p in names))

    @property
    def total_dim(self) -> int:
        return math.prod(d for _, d in self.dims)

    def n_params(self) -> int:
        pd = dict(self.dims)
        return 2 * self.total_dim + sum(2 * pd[p] for _, p in self.parties)

    def random_params(self, rng: np.random.Generator) -> np.ndarray:
        return rng.normal(size=self.n_params())

    def vectors(self, x: np.ndarray) -> tuple[np.ndarray, dict]:
        """Unit state vector and per-label local measurement vectors."""
        z = x[0::2] + 1j * x[1::2]
        psi = _unit(z[:self.total_dim])
        pd = dict(self.dims)
        raw, k = {}, self.total_dim
        for lab, p in self.parties:
            raw[lab] = z[k:k + pd[p]]
            k += pd[p]
        out = {}
        for lab, p in self.parties:
            earlier = [out[o] for o, q in self.parties
                       if o in out and q == p and self.scenario.compatible(lab, o)]
            out[lab] = _orthogonalize(raw[lab], earlier)
        return psi, out

    def local_projector(self, label: str, v: np.ndarray) -> np.ndarray:
        party = dict(self.parties)[label]
        mats = []
        for p, d in self.dims:
            mats.append(np.outer(v, v.conj()) if p == party else np.eye(d))
        out = mats[0]
        for m in mats[1:]:
            out = np.kron(out, m)
        return out

    def fast_value(self, x: np.ndarray, expr: TestExpression) -> float:
        """``expr`` on the pure-state experiment of ``x`` via state-vector amplitudes."""
        psi, vecs = self.vectors(x)
        proj = {lab: self.local_projector(lab, v) for lab, v in vecs.items()}
        total = 0.0
        for s, c in expr.functional().items():
            branches = [psi]
            for lab in s:
                p = proj[lab]
                nxt = []
                for b in branches:
                    pb = p @ b
                    nxt += [b - pb, pb]
                branches = nxt
            probs = np.array([np.vdot(b, b).real for b in branches])
            total += c * shannon_entropy(probs)
        return total

    def experiment(self, x: np.ndarray, check: bool = True) -> QuantumExperiment:
        psi, vecs = self.vectors(x)
        rho = np.outer(psi, psi.conj())
        eye = np.eye(self.total_dim)
        meas = {}
        for lab, _ in self.parties:
            p = self.local_projector(lab, vecs[lab])
            meas[lab] = (eye - p, p)
        if check:
            return QuantumExperiment(self.total_dim, rho, meas, self.scenario)
        exp = object.__new__(QuantumExperiment)
        object.__setattr__(exp, "dim", self.total_dim)
        object.__setattr__(exp, "state", rho)
        object.__setattr__(exp, "measurements", tuple((k, v) for k, v in meas.items()))
        object.__setattr__(exp, "scenario", self.scenario)
        return exp


def _unit(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    return v / n if n > 1e-12 else np.zeros_like(v)


def _orthogonalize(v: np.ndarray, others: Sequence[np.ndarray]) -> np.ndarray:
    """Unit vector along ``v`` minus its projection on span(others); zero if none."""
    basis = []
    for o in others:
        for q in basis:
            o = o - q * np.vdot(q, o)
        if np.linalg.norm(o) > 1e-12:
            basis.append(_unit(o))
    for q in basis:
        v = v - q * np.vdot(q, v)
    for q in basis:     # second pass for numerical orthogonality
        v = v - q * np.vdot(q, v)
    return _unit(v)


def expression_value(experiment: QuantumExperiment, expr: TestExpression) -> float:
    """Evaluate ``expr`` using only the entropies it needs (no disturbance checks)."""
    total = 0.0
    for s, c in expr.functional().items():
        labs = sorted(s)
        t = joint_probability(experiment, labs, check=False)
        total += c * t.entropy()
    return total


def pentagram_experiment(theta: float | None = None, n: int = 5) -> QuantumExperiment:
    """Qutrit n-cycle model with state (0,0,1) and symmetric rank-1 projectors.

    Vectors sit on a cone of half-angle ``theta`` around the state; the
    default angle makes cyclic neighbours orthogonal. Other angles are
    repaired by orthogonalizing each vector against its earlier neighbours.
    """
    if theta is None:
        c = math.cos(math.pi / n)
        theta = math.acos(math.sqrt(c / (1 + c)))
    step = 2 * math.pi * (n // 2) / n
    raw = [np.array([math.sin(theta) * math.cos(step * j),
                     math.sin(theta) * math.sin(step * j), math.cos(theta)], dtype=complex)
           for j in range(n)]
    vecs = []
    for j in range(n):
        earlier = ([vecs[j - 1]] if j > 0 else []) + ([vecs[0]] if j == n - 1 else [])
        vecs.append(_orthogonalize(raw[j], earlier))
    labels = [f"A{i}" for i in range(1, n + 1)]
    from .scenario import n_cycle_scenario
    eye = np.eye(3)
    meas = {lab: (eye - np.outer(v, v.conj()), np.outer(v, v.conj()))
            for lab, v in zip(labels, vecs)}
    psi = np.array([0, 0, 1], dtype=complex)
    return QuantumExperiment(3, np.outer(psi, psi.conj()), meas, n_cycle_scenario(n))


@dataclass(frozen=True)
class OptimizationResult:
    value: float
    experiment: QuantumExperiment
    seed: int
    params: np.ndarray = field(repr=False)
    per_seed: tuple = ()


def _nelder_mead(f, x, maxiter, restarts):
    val = -f(x)
    for _ in range(restarts + 1):
        res = minimize(f, x, method="Nelder-Mead",
                       options={"maxiter": maxiter, "xatol": 1e-10, "fatol": 1e-14})
        if -res.fun >= val:
            x, val = res.x, -res.fun
    return x, val


def optimize_violation(layout: Layout, expr: TestExpression, seeds: Sequence[int] = (0, 1, 2),
                       *, maxiter: int = 4000, restarts: int = 2,
                       starts: Sequence[np.ndarray] = ()) -> OptimizationResult:
    """Maximise ``expr`` over the layout's rank-1 dichotomic experiments.

    Each seed draws a random start and runs Nelder-Mead, restarting
    ``restarts`` times from the last point; explicit ``starts`` are run as
    well. The best value wins, ties go to the earliest start. Results are
    reproducible for a fixed seed list; global optimality is not claimed.
    """
    if not seeds and not len(starts):
        raise ValueError("need at least one seed or start point")

    def f(x):
        return -layout.fast_value(x, expr)

    inits = [(seed, layout.random_params(np.random.default_rng(seed))) for seed in seeds]
    inits += [(-1 - k, np.asarray(x0, dtype=float)) for k, x0 in enumerate(starts)]
    best = None
    per_seed = []
    for seed, x0 in inits:
        x, val = _nelder_mead(f, x0, maxiter, restarts)
        per_seed.append(val)
        if best is None or val > best[0]:
            best = (val, seed, x)
    val, seed, x = best
    exp = layout.experiment(x)
    return OptimizationResult(expression_value(exp, expr), exp, seed, x, tuple(per_seed))


@dataclass(frozen=True)
class MonogamyReport:
    max_value: float
    terms: tuple                 # (name, value) of each test at the maximiser
    trials: int
    random_max: float
    optimizer_max: float
    experiment: QuantumExperiment = field(repr=False)


def verify_monogamy(layout: Layout, exprs: Sequence[TestExpression], *, trials: int = 1000,
                    seed: int = 0, optimizer_seeds: Sequence[int] = (0,),
                    maxiter: int = 2000) -> MonogamyReport:
    """Largest value of ``sum(exprs)`` over random and optimized experiments.

    Random experiments draw Haar-random pure states and Haar-random
    measurement vectors (made orthogonal where compatibility requires).
    """
    total = monogamy_sum(list(exprs))
    rng = np.random.default_rng(seed)
    best_val, best_x = -math.inf, None
    for _ in range(trials):
        x = layout.random_params(rng)
        v = layout.fast_value(x, total)
        if v > best_val:
            best_val, best_x = v, x
    random_max = best_val
    opt_max = -math.inf
    if optimizer_seeds:
        # warm starts: points where a single test is pushed towards violation
        warm = [optimize_violation(layout, e, optimizer_seeds, maxiter=maxiter, restarts=0).params
                for e in exprs]
        opt = optimize_violation(layout, total, optimizer_seeds, maxiter=maxiter, restarts=0,
                                 starts=warm)
        opt_max = opt.value
        if opt.value > best_val:
            best_val, best_x = opt.value, opt.params
    exp = layout.experiment(best_x)
    terms = tuple((e.name, expression_value(exp, e)) for e in exprs)
    return MonogamyReport(best_val, terms, trials, random_max, opt_max, exp)


def entropy_vector_value(experiment: QuantumExperiment, scenario: Scenario,
                         expr: TestExpression) -> float:
    """Evaluate through the full observed vector (with disturbance checks)."""
    return float(evaluate_expression(expr, observed_entropy_vector(experiment, scenario)))
