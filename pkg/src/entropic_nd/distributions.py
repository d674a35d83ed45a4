"""Finite joint distributions stored as numpy arrays, one axis per label."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .scenario import EntropyVector, SubsetIndex


def shannon_entropy(p: np.ndarray) -> float:
    """Entropy in bits, with ``0 log 0 = 0``."""
    q = np.asarray(p, dtype=float).ravel()
    q = q[q > 0]
    return float(-(q * np.log2(q)).sum())


@dataclass(frozen=True)
class Distribution:
    """Joint probability array over ``labels`` (axis k belongs to labels[k])."""

    labels: tuple
    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != len(self.labels):
            raise ValueError("one array axis per label")
        if (p < -1e-15).any():
            raise ValueError("negative probability")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {p.sum()}")
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "probs", p)

    def marginal(self, subset) -> "Distribution":
        keep = [x for x in self.labels if x in set(subset)]
        missing = set(subset) - set(self.labels)
        if missing:
            raise KeyError(f"labels {sorted(missing)} not in distribution")
        axes = tuple(k for k, x in enumerate(self.labels) if x not in set(subset))
        return Distribution(tuple(keep), self.probs.sum(axis=axes))

    def entropy(self, subset=None) -> float:
        if subset is None:
            return shannon_entropy(self.probs)
        if not subset:
            return 0.0
        return shannon_entropy(self.marginal(subset).probs)

    def entropy_vector(self, index: SubsetIndex) -> EntropyVector:
        return EntropyVector(index, tuple(max(self.entropy(s), 0.0) for s in index))


def random_distribution(rng: np.random.Generator, labels: Sequence[str],
                        cards: Sequence[int] | int = 2, sparsity: float = 0.0) -> Distribution:
    """Dirichlet-like random joint distribution; ``sparsity`` zeroes a fraction of cells."""
    if isinstance(cards, int):
        cards = [cards] * len(labels)
    p = rng.exponential(size=tuple(cards))
    if sparsity > 0:
        p = p * (rng.random(p.shape) >= sparsity)
        if p.sum() == 0:
            p.flat[rng.integers(p.size)] = 1.0
    return Distribution(tuple(labels), p / p.sum())


def full_entropy_vector(dist: Distribution) -> EntropyVector:
    return dist.entropy_vector(SubsetIndex.full(dist.labels))


def markov_distribution(labels: Sequence[str], cliques: Sequence[Sequence[str]],
                        separators: Sequence[Sequence[str]],
                        tables: dict) -> Distribution:
    """``prod_C p(C) / prod_S p(S)`` with ``0/0 = 0``.

    ``tables`` maps each clique (as a frozenset) to a :class:`Distribution` over
    it; separator marginals are taken from any clique containing them.
    """
    labels = list(labels)
    cards = {}
    for c in cliques:
        d = tables[frozenset(c)]
        for x, n in zip(d.labels, d.probs.shape):
            if cards.setdefault(x, n) != n:
                raise ValueError(f"inconsistent outcome count for {x}")
    shape = tuple(cards[x] for x in labels)
    out = np.ones(shape)

    def broadcast(d: Distribution) -> np.ndarray:
        arr = np.moveaxis(d.probs, range(len(d.labels)),
                          sorted(range(len(d.labels)), key=lambda k: labels.index(d.labels[k])))
        order = sorted(d.labels, key=labels.index)
        view = [cards[x] if x in order else 1 for x in labels]
        return arr.reshape(view)

    for c in cliques:
        out = out * broadcast(tables[frozenset(c)])
    for s in separators:
        if not s:
            continue
        host = next(tables[frozenset(c)] for c in cliques if set(s) <= set(c))
        den = broadcast(host.marginal(s))
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(den > 0, out / np.where(den > 0, den, 1.0), 0.0)
    return Distribution(tuple(labels), out / out.sum())


def pairwise_subsets(labels: Sequence[str]):
    return [frozenset(c) for r in (1, 2) for c in combinations(labels, r)]
