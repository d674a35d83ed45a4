"""Measurement scenarios and subset-indexed entropy coordinates.

A scenario is a set of measurement labels, a compatibility graph on them and
a list of contexts (cliques of that graph whose joint statistics are
accessible). Entropy vectors are indexed by nonempty label subsets; the empty
set is not a coordinate (its entropy is zero by convention).

Subsets are ``frozenset`` objects of label strings. Coordinates are ordered by
cardinality first, then lexicographically on the positions of the labels in
the scenario's label order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from numbers import Real
from typing import Iterable, Mapping, Sequence

Subset = frozenset


class ScenarioError(ValueError):
    """Base class for malformed scenarios."""


class ContextNotClique(ScenarioError):
    pass


class DanglingLabel(ScenarioError):
    pass


class UncoveredEdge(ScenarioError):
    pass


class IndexMismatch(ValueError):
    pass


def _sort_key(labels: Sequence[str]):
    pos = {lab: i for i, lab in enumerate(labels)}

    def key(s):
        return (len(s), sorted(pos[x] for x in s))
    return key


@dataclass(frozen=True)
class SubsetIndex:
    """Ordered coordinate system over nonempty label subsets."""

    labels: tuple[str, ...]
    subsets: tuple[frozenset, ...]
    _pos: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_pos", {s: i for i, s in enumerate(self.subsets)})
        if len(self._pos) != len(self.subsets):
            raise ValueError("duplicate subsets in index")

    @classmethod
    def from_subsets(cls, labels: Sequence[str], subsets: Iterable) -> "SubsetIndex":
        labels = tuple(labels)
        known = set(labels)
        subs = {frozenset(s) for s in subsets}
        subs.discard(frozenset())
        for s in subs:
            if not s <= known:
                raise DanglingLabel(f"subset {sorted(s)} uses unknown labels")
        return cls(labels, tuple(sorted(subs, key=_sort_key(labels))))

    @classmethod
    def full(cls, labels: Sequence[str]) -> "SubsetIndex":
        labels = tuple(labels)
        subs = (frozenset(c) for k in range(1, len(labels) + 1)
                for c in combinations(labels, k))
        return cls.from_subsets(labels, subs)

    @classmethod
    def observed(cls, labels: Sequence[str], contexts: Iterable) -> "SubsetIndex":
        subs = set()
        for ctx in contexts:
            ctx = tuple(ctx)
            for k in range(1, len(ctx) + 1):
                subs.update(frozenset(c) for c in combinations(ctx, k))
        return cls.from_subsets(labels, subs)

    def __len__(self) -> int:
        return len(self.subsets)

    def __iter__(self):
        return iter(self.subsets)

    def __contains__(self, s) -> bool:
        return frozenset(s) in self._pos

    def position(self, s) -> int:
        try:
            return self._pos[frozenset(s)]
        except KeyError:
            raise IndexMismatch(f"subset {self.key(s)!r} is not a coordinate") from None

    @property
    def is_full(self) -> bool:
        return len(self.subsets) == 2 ** len(self.labels) - 1

    def key(self, s) -> str:
        """Canonical string for a subset, e.g. ``"A1,A2"``."""
        order = {lab: i for i, lab in enumerate(self.labels)}
        return ",".join(sorted(s, key=lambda x: order.get(x, len(order))))

    def parse_key(self, text: str) -> frozenset:
        parts = [p.strip() for p in text.split(",") if p.strip()]
        s = frozenset(parts)
        if s not in self._pos:
            raise IndexMismatch(f"unknown coordinate {text!r}")
        return s

    def is_subindex_of(self, other: "SubsetIndex") -> bool:
        return all(s in other for s in self.subsets)


@dataclass(frozen=True)
class EntropyVector:
    """Entropy values (bits) on the coordinates of a :class:`SubsetIndex`.

    Values may be floats or exact ``Fraction`` numbers.
    """

    index: SubsetIndex
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(self.index):
            raise IndexMismatch(
                f"{len(self.values)} values for {len(self.index)} coordinates")
        for v in self.values:
            if not isinstance(v, Real):
                raise TypeError(f"entropy value {v!r} is not real")
            if isinstance(v, float) and not (v == v and abs(v) != float("inf")):
                raise ValueError("entropy values must be finite")
            if v < 0:
                raise ValueError(f"negative entropy value {v}")

    @classmethod
    def from_mapping(cls, index: SubsetIndex, data: Mapping) -> "EntropyVector":
        vals = []
        lookup = {frozenset(k.split(",")) if isinstance(k, str) else frozenset(k): v
                  for k, v in data.items()}
        for s in index:
            if s not in lookup:
                raise IndexMismatch(f"missing coordinate {index.key(s)!r}")
            vals.append(lookup[s])
        if len(lookup) != len(index):
            extra = [k for k in lookup if k not in index]
            raise IndexMismatch(f"unexpected coordinates {[index.key(k) for k in extra]}")
        return cls(index, tuple(vals))

    @classmethod
    def zeros(cls, index: SubsetIndex) -> "EntropyVector":
        return cls(index, (0,) * len(index))

    def __getitem__(self, s):
        if isinstance(s, str):
            s = s.split(",")
        s = frozenset(s)
        if not s:
            return 0
        return self.values[self.index.position(s)]

    def get(self, s, default=None):
        s = frozenset(s)
        if not s:
            return 0
        return self.values[self.index.position(s)] if s in self.index else default

    def as_dict(self) -> dict:
        return dict(zip(self.index.subsets, self.values))

    def to_floats(self) -> "EntropyVector":
        return EntropyVector(self.index, tuple(float(v) for v in self.values))

    @property
    def is_exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.values)

    def to_json(self) -> str:
        data = {}
        for s, v in zip(self.index.subsets, self.values):
            data[self.index.key(s)] = (float(v) if isinstance(v, Fraction)
                                       and v.denominator != 1 else
                                       int(v) if isinstance(v, Fraction) else v)
        return json.dumps(data, indent=2)

    @classmethod
    def from_json(cls, index: SubsetIndex, text: str) -> "EntropyVector":
        return cls.from_mapping(index, json.loads(text))

    def combine(self, other: "EntropyVector", a=1, b=1) -> "EntropyVector":
        if other.index != self.index:
            raise IndexMismatch("vectors live on different indices")
        return EntropyVector(self.index, tuple(a * x + b * y
                                               for x, y in zip(self.values, other.values)))


def _edge(u, v) -> frozenset:
    if u == v:
        raise ScenarioError(f"self-loop on {u!r}")
    return frozenset((u, v))


@dataclass(frozen=True)
class Scenario:
    labels: tuple[str, ...]
    edges: frozenset
    contexts: tuple[frozenset, ...]

    @property
    def full_index(self) -> SubsetIndex:
        return SubsetIndex.full(self.labels)

    @property
    def observed_index(self) -> SubsetIndex:
        return SubsetIndex.observed(self.labels, self.contexts)

    def neighbours(self, label) -> set:
        return {w for e in self.edges if label in e for w in e if w != label}

    def compatible(self, u, v) -> bool:
        return frozenset((u, v)) in self.edges

    def induced(self, labels: Iterable[str]) -> "Scenario":
        """Sub-scenario on ``labels`` whose contexts are the maximal cliques."""
        keep = [x for x in self.labels if x in set(labels)]
        ks = set(keep)
        edges = [tuple(e) for e in self.edges if e <= ks]
        return new_scenario(keep, edges)

    def to_json(self) -> str:
        order = {lab: i for i, lab in enumerate(self.labels)}
        srt = lambda s: sorted(s, key=order.__getitem__)  # noqa: E731
        data = {
            "labels": list(self.labels),
            "edges": sorted((srt(e) for e in self.edges), key=lambda e: [order[x] for x in e]),
            "contexts": [srt(c) for c in self.contexts],
        }
        return json.dumps(data, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "Scenario":
        data = json.loads(text)
        if not isinstance(data, dict) or "labels" not in data:
            raise ScenarioError("scenario JSON needs a 'labels' field")
        return new_scenario(data["labels"], data.get("edges", []), data.get("contexts"))


def new_scenario(labels: Sequence[str], compat_edges: Iterable,
                 contexts: Iterable | None = None) -> Scenario:
    """Validate and build a scenario.

    When ``contexts`` is omitted the maximal cliques of the compatibility graph
    are used (isolated labels become singleton contexts).
    """
    from .graphs import Graph, maximal_cliques

    labels = tuple(str(x) for x in labels)
    if len(set(labels)) != len(labels):
        raise ScenarioError("labels must be distinct")
    known = set(labels)
    edges = set()
    for e in compat_edges:
        e = tuple(e)
        if len(e) != 2:
            raise ScenarioError(f"edge {e!r} is not a pair")
        u, v = (str(x) for x in e)
        for x in (u, v):
            if x not in known:
                raise DanglingLabel(f"edge references unknown label {x!r}")
        edges.add(_edge(u, v))
    edges = frozenset(edges)

    if contexts is None:
        ctxs = [frozenset(c) for c in maximal_cliques(Graph(labels, edges))]
    else:
        ctxs = []
        for c in contexts:
            c = frozenset(str(x) for x in c)
            if not c:
                raise ScenarioError("empty context")
            for x in c:
                if x not in known:
                    raise DanglingLabel(f"context references unknown label {x!r}")
            for u, v in combinations(sorted(c), 2):
                if frozenset((u, v)) not in edges:
                    raise ContextNotClique(
                        f"context {sorted(c)} is not a clique: {u}-{v} missing")
            ctxs.append(c)
        if len(set(ctxs)) != len(ctxs):
            raise ScenarioError("contexts must be pairwise distinct")
    for e in edges:
        if not any(e <= c for c in ctxs):
            raise UncoveredEdge(f"edge {sorted(e)} lies in no context")
    return Scenario(labels, edges, tuple(ctxs))


def n_cycle_scenario(n: int, prefix: str = "A") -> Scenario:
    """Labels ``A1..An`` with ``A_i`` compatible with ``A_{i+1}`` (cyclically)."""
    if n < 3:
        raise ValueError("an n-cycle scenario needs n >= 3")
    labels = [f"{prefix}{i}" for i in range(1, n + 1)]
    pairs = [(labels[i], labels[(i + 1) % n]) for i in range(n)]
    return new_scenario(labels, pairs, pairs)


def chained_bell_scenario(m: int) -> Scenario:
    """Bipartite chained Bell scenario: the 2m-cycle A0-B0-A1-B1-...-A_{m-1}-B_{m-1}-A0."""
    if m < 2:
        raise ValueError("a chained Bell scenario needs m >= 2")
    order = []
    for i in range(m):
        order += [f"A{i}", f"B{i}"]
    pairs = [(order[i], order[i + 1]) for i in range(2 * m - 1)]
    pairs.append((order[0], order[-1]))
    labels = [f"A{i}" for i in range(m)] + [f"B{i}" for i in range(m)]
    return new_scenario(labels, pairs, pairs)


def project(full: EntropyVector, scenario: Scenario) -> EntropyVector:
    """Restrict a full entropy vector to the scenario's observed coordinates."""
    if set(full.index.labels) != set(scenario.labels) or not full.index.is_full:
        raise IndexMismatch("expected a full vector over the scenario's labels")
    return restrict(full, scenario.observed_index)


def restrict(vector: EntropyVector, index: SubsetIndex) -> EntropyVector:
    return EntropyVector(index, tuple(vector[s] for s in index))
