"""Homogeneous linear inequalities and polyhedral cones over entropy coordinates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from ..scenario import EntropyVector, IndexMismatch, Scenario, SubsetIndex

ELEMENTAL = "elemental"
DERIVED = "derived-by-FM"
INTERSECTION = "intersection"

FLOAT_TOL = 1e-9


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def normalize_coeffs(coeffs: Sequence) -> tuple[int, ...]:
    """Scale a rational vector by a positive factor to a primitive integer vector."""
    fr = [Fraction(c) for c in coeffs]
    den = 1
    for c in fr:
        den = _lcm(den, c.denominator)
    ints = [int(c * den) for c in fr]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g == 0:
        raise ValueError("inequality is identically zero")
    return tuple(v // g for v in ints)


def _term(index: SubsetIndex, s) -> str:
    return f"H({index.key(s)})"


@dataclass(frozen=True)
class LinearInequality:
    """``sum_S coeffs[S] * H(S) >= 0`` with primitive integer coefficients."""

    index: SubsetIndex
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != len(self.index):
            raise IndexMismatch("coefficient count does not match the index")
        norm = normalize_coeffs(self.coeffs)
        object.__setattr__(self, "coeffs", norm)

    @classmethod
    def from_terms(cls, index: SubsetIndex, terms: dict) -> "LinearInequality":
        vec = [0] * len(index)
        for s, c in terms.items():
            s = frozenset(s)
            if s:
                vec[index.position(s)] += c
        return cls(index, tuple(vec))

    def terms(self) -> dict:
        return {s: c for s, c in zip(self.index.subsets, self.coeffs) if c}

    def value(self, vector: EntropyVector):
        if vector.index != self.index:
            raise IndexMismatch("vector and inequality live on different indices")
        return sum(c * v for c, v in zip(self.coeffs, vector.values) if c)

    def restricted(self, index: SubsetIndex) -> "LinearInequality":
        """Re-express on ``index``; coordinates outside it must have zero weight."""
        terms = self.terms()
        for s in terms:
            if s not in index:
                raise IndexMismatch(f"coordinate {self.index.key(s)} not in target index")
        return LinearInequality.from_terms(index, terms)

    def lifted(self, index: SubsetIndex) -> "LinearInequality":
        return LinearInequality.from_terms(index, self.terms())

    def to_text(self) -> str:
        parts = [f"{c:+d} {_term(self.index, s)}"
                 for s, c in zip(self.index.subsets, self.coeffs) if c]
        return " ".join(parts) + " >= 0"

    def sort_key(self):
        nz = [(i, -c) for i, c in enumerate(self.coeffs) if c]
        return (len(nz), nz)

    def __str__(self) -> str:
        return self.to_text()


def parse_inequality(index: SubsetIndex, line: str) -> LinearInequality:
    """Inverse of :meth:`LinearInequality.to_text`."""
    body = line.strip()
    if not body.endswith(">= 0"):
        raise ValueError(f"not an inequality line: {line!r}")
    toks = body[:-4].split()
    if len(toks) % 2:
        raise ValueError(f"malformed inequality: {line!r}")
    terms = {}
    for coef, term in zip(toks[0::2], toks[1::2]):
        if not (term.startswith("H(") and term.endswith(")")):
            raise ValueError(f"bad term {term!r}")
        s = index.parse_key(term[2:-1])
        terms[s] = terms.get(s, 0) + int(coef)
    return LinearInequality.from_terms(index, terms)


@dataclass(frozen=True)
class Cone:
    """H-representation ``{h : a.h >= 0 for every inequality a}``."""

    index: SubsetIndex
    inequalities: tuple
    provenance: tuple

    def __init__(self, index: SubsetIndex, inequalities: Iterable, provenance: Iterable | None = None):
        ineqs = list(inequalities)
        prov = list(provenance) if provenance is not None else [ELEMENTAL] * len(ineqs)
        if len(prov) != len(ineqs):
            raise ValueError("one provenance tag per inequality")
        seen, keep_i, keep_p = set(), [], []
        for q, p in zip(ineqs, prov):
            if q.index != index:
                raise IndexMismatch("inequality index differs from cone index")
            if q.coeffs in seen:
                continue
            seen.add(q.coeffs)
            keep_i.append(q)
            keep_p.append(p)
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "inequalities", tuple(keep_i))
        object.__setattr__(self, "provenance", tuple(keep_p))

    def __len__(self) -> int:
        return len(self.inequalities)

    def __iter__(self):
        return iter(self.inequalities)

    def coefficient_set(self) -> set:
        return {q.coeffs for q in self.inequalities}

    def sorted(self) -> "Cone":
        pairs = sorted(zip(self.inequalities, self.provenance), key=lambda t: t[0].sort_key())
        return Cone(self.index, [q for q, _ in pairs], [p for _, p in pairs])

    def to_text(self) -> str:
        return "".join(q.to_text() + "\n" for q in self.sorted().inequalities)

    def contains_inequality(self, ineq: LinearInequality) -> bool:
        return ineq.coeffs in self.coefficient_set()


def elemental_terms(labels: Sequence[str]) -> list[dict]:
    """Elemental Shannon inequalities on ``labels`` as {subset: coefficient} maps.

    Order: the conditional-entropy inequalities ``H(N) - H(N - i) >= 0`` for each
    label, then ``I(i:j|K) >= 0`` for each pair ``i < j`` and each ``K`` in
    cardinality-then-lexicographic order.
    """
    labels = list(labels)
    n = len(labels)
    if n < 1:
        raise ValueError("need at least one label")
    full = frozenset(labels)
    out = []
    for x in labels:
        t = {full: 1}
        rest = full - {x}
        if rest:
            t[rest] = -1
        out.append(t)
    for i, j in combinations(range(n), 2):
        others = [labels[k] for k in range(n) if k not in (i, j)]
        for r in range(len(others) + 1):
            for K in combinations(others, r):
                K = frozenset(K)
                t = {}
                for s, c in ((K | {labels[i]}, 1), (K | {labels[j]}, 1),
                             (K | {labels[i], labels[j]}, -1), (K, -1)):
                    if s:
                        t[s] = t.get(s, 0) + c
                out.append(t)
    return out


def elemental_inequalities(n_or_labels) -> list[LinearInequality]:
    """The elemental set generating the Shannon cone on ``n`` variables.

    Accepts either a count (labels ``X1..Xn``) or an explicit label sequence.
    There are ``n + C(n,2) 2^(n-2)`` of them.
    """
    labels = _labels(n_or_labels)
    index = SubsetIndex.full(labels)
    return [LinearInequality.from_terms(index, t) for t in elemental_terms(labels)]


def _labels(n_or_labels) -> tuple[str, ...]:
    if isinstance(n_or_labels, Scenario):
        return n_or_labels.labels
    if isinstance(n_or_labels, int):
        if n_or_labels < 1:
            raise ValueError("n must be at least 1")
        return tuple(f"X{i}" for i in range(1, n_or_labels + 1))
    return tuple(n_or_labels)


def shannon_cone(scenario_or_n) -> Cone:
    """Cone over the full subset index cut out by the elemental inequalities."""
    ineqs = elemental_inequalities(scenario_or_n)
    return Cone(ineqs[0].index, ineqs, [ELEMENTAL] * len(ineqs))


def nd_cone(scenario: Scenario) -> Cone:
    """Union of each context's elemental inequalities over the observed coordinates."""
    index = scenario.observed_index
    order = {lab: i for i, lab in enumerate(scenario.labels)}
    ineqs = []
    for ctx in scenario.contexts:
        labs = sorted(ctx, key=order.__getitem__)
        ineqs += [LinearInequality.from_terms(index, t) for t in elemental_terms(labs)]
    return Cone(index, ineqs, [INTERSECTION] * len(ineqs))


@dataclass(frozen=True)
class Membership:
    inside: bool
    slacks: tuple
    violated: LinearInequality | None = None
    violation: float | Fraction | None = None

    def __bool__(self) -> bool:
        return self.inside


def membership(vector: EntropyVector, cone: Cone, tol: float = FLOAT_TOL) -> Membership:
    """Decide ``vector in cone``.

    Exact vectors are compared exactly; float vectors with absolute tolerance
    ``tol`` on each slack. When outside, the inequality with the largest
    violation relative to its coefficient norm is reported.
    """
    if vector.index != cone.index:
        raise IndexMismatch("vector and cone live on different indices")
    exact = vector.is_exact
    slacks = tuple(q.value(vector) for q in cone.inequalities)
    worst, worst_rel = None, 0.0
    for q, s in zip(cone.inequalities, slacks):
        bad = s < 0 if exact else s < -tol
        if bad:
            rel = -float(s) / math.sqrt(sum(c * c for c in q.coeffs))
            if worst is None or rel > worst_rel:
                worst, worst_rel = q, rel
    if worst is None:
        return Membership(True, slacks)
    return Membership(False, slacks, worst, -worst.value(vector))
