"""Extending observed entropies on a chordal scenario to all subsets."""

from __future__ import annotations

from fractions import Fraction

from ..distributions import markov_distribution
from ..graphs import Graph, JunctionTree, NotChordal, is_chordal, junction_tree, maximal_cliques
from ..polyhedra import lp
from ..polyhedra.cone import FLOAT_TOL, elemental_terms, membership, nd_cone
from ..polyhedra.extension import extension_feasible
from ..scenario import EntropyVector, IndexMismatch, Scenario, ScenarioError

import numpy as np
from scipy.optimize import linprog


class ObservedOutsideND(ValueError):
    def __init__(self, message, violated):
        super().__init__(message)
        self.violated = violated


class MissingCliqueEntropy(ScenarioError):
    pass


class ExtensionInfeasible(RuntimeError):
    pass


class MarginalMismatch(ValueError):
    pass


def compatibility_graph(scenario: Scenario) -> Graph:
    return Graph(scenario.labels, scenario.edges)


def _subtree(tree: JunctionTree, s: frozenset) -> tuple[set, list]:
    """Cliques meeting ``s`` plus every clique on tree paths between them."""
    hit = [i for i, c in enumerate(tree.nodes) if s & set(c)]
    nodes = set(hit)
    for a in hit:
        for b in hit:
            p = tree.path(a, b)
            if p is not None:
                nodes.update(p)
    edges = [(i, j, sep) for i, j, sep in tree.tree_edges if i in nodes and j in nodes]
    return nodes, edges


def junction_value(tree: JunctionTree, s: frozenset, lookup):
    """Junction-tree formula for H(s), or None when ``s`` misses a spanned separator.

    ``lookup(t)`` returns H(t) for subsets of a single clique. The formula
    ``sum H(s & C) - sum H(sep)`` over the subtree spanned by ``s`` is the
    Markov entropy whenever every separator on that subtree lies inside ``s``.
    """
    nodes, edges = _subtree(tree, s)
    if any(not set(sep) <= s for _, _, sep in edges):
        return None
    total = 0
    for i in nodes:
        part = s & frozenset(tree.nodes[i])
        total += lookup(part) if part else 0
    for _, _, sep in edges:
        total -= lookup(frozenset(sep))
    return total


def chordal_extension(observed: EntropyVector, scenario: Scenario,
                      distributions: dict | None = None, tol: float = FLOAT_TOL) -> EntropyVector:
    """Full entropy vector on a chordal scenario restricting to ``observed``.

    With ``distributions`` (clique frozenset -> :class:`Distribution`) the
    vector is that of the Markov junction-tree distribution. Otherwise subsets
    that contain every separator of the junction subtree they span get the
    junction-tree value, and the remaining coordinates are filled by a linear
    program over the elemental Shannon inequalities (exact for exact input).
    """
    g = compatibility_graph(scenario)
    res = is_chordal(g)
    if not res:
        raise NotChordal(f"compatibility graph has induced cycle {list(res.induced_cycle)}")
    if observed.index != scenario.observed_index:
        raise IndexMismatch("vector is not over the scenario's observed index")
    m = membership(observed, nd_cone(scenario), tol)
    if not m:
        raise ObservedOutsideND(f"observed data violates {m.violated.to_text()}", m.violated)
    tree = junction_tree(g)
    for c in tree.nodes:
        if frozenset(c) not in observed.index:
            raise MissingCliqueEntropy(f"clique {list(c)} is not an observed coordinate")
    full = scenario.full_index

    if distributions is not None:
        dist = markov_distribution(scenario.labels, tree.nodes, tree.separators(),
                                   {frozenset(k): v for k, v in distributions.items()})
        vals = []
        for s in full:
            h = dist.entropy(s)
            if s in observed.index:
                if abs(h - float(observed[s])) > 1e-9:
                    raise MarginalMismatch(
                        f"clique tables give H({full.key(s)})={h}, observed {observed[s]}")
                h = observed[s]
            vals.append(max(h, 0.0) if isinstance(h, float) else h)
        return EntropyVector(full, tuple(vals))

    fixed = {}
    for s in full:
        if s in observed.index:
            fixed[s] = observed[s]
            continue
        v = junction_value(tree, s, lambda t: observed[t])
        if v is not None:
            fixed[s] = v
    out = _fill(full, scenario.labels, fixed, observed.is_exact, tol)
    if out is None:
        # pinned junction values over-constrain; fall back to the observed data alone
        ext = extension_feasible(observed, scenario, tol)
        if not ext.feasible:
            raise ExtensionInfeasible("observed data admits no Shannon extension")
        return ext.witness
    return out


def _fill(full, labels, fixed, exact, tol):
    free = [s for s in full if s not in fixed]
    pos = {s: k for k, s in enumerate(free)}
    rows, rhs = [], []
    for t in elemental_terms(labels):
        row = [0] * len(free)
        const = 0
        for s, c in t.items():
            if s in pos:
                row[pos[s]] += c
            else:
                const += c * fixed[s]
        if not any(row):
            if (const < 0) if exact else (const < -tol):
                return None
            continue
        rows.append([-v for v in row])   # -row.x <= const
        rhs.append(const)
    if exact:
        if free:
            res = lp.solve([0] * len(free), rows, rhs)
            if not res.success:
                return None
            x = res.x
        else:
            x = []
        vals = [fixed[s] if s in fixed else x[pos[s]] for s in full]
        return EntropyVector(full, tuple(Fraction(v) for v in vals))
    if free:
        A = np.array(rows, dtype=float).reshape(len(rows), len(free))
        b = np.array([float(v) for v in rhs])
        res = linprog(np.zeros(len(free)), A_ub=A if len(rows) else None,
                      b_ub=b if len(rows) else None, bounds=(0, None), method="highs",
                      options={"primal_feasibility_tolerance": 1e-10})
        if res.status != 0:
            return None
        x = res.x
    else:
        x = []
    vals = [float(fixed[s]) if s in fixed else max(float(x[pos[s]]), 0.0) for s in full]
    return EntropyVector(full, tuple(vals))


def clique_piece_entropy(observed: EntropyVector, graph: Graph):
    """Top entropy from the triangle/edge/vertex piece formula.

    Pieces are the maximal cliques with at least three vertices, the edges in
    no such clique and the isolated vertices. The value is
    ``sum H(piece) - (1/2) sum_{l != s} H(piece_l & piece_s)`` over ordered
    pairs of distinct pieces. It matches the junction-tree value on paths of
    pieces, but not in general: when k pieces share a vertex v it subtracts
    ``k(k-1)/2`` copies of H(v) where the junction tree subtracts ``k-1``.
    """
    big = [frozenset(c) for c in maximal_cliques(graph) if len(c) >= 3]
    edges = [e for e in graph.edges if not any(e <= c for c in big)]
    adj = graph.adjacency()
    lone = [frozenset([v]) for v in graph.vertices if not adj[v]]
    pieces = big + sorted(edges, key=sorted) + lone
    total = sum(observed[p] for p in pieces)
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            inter = pieces[i] & pieces[j]
            if inter:
                total -= observed[inter]
    return total
