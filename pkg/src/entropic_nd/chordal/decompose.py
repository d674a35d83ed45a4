"""Splitting a sum of two test expressions into two chordal, valid parts."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..graphs import Graph, is_chordal
from ..inequalities import TestExpression
from ..polyhedra import lp
from ..polyhedra.cone import nd_cone
from ..scenario import IndexMismatch, Scenario

FOUND = "found"
NOT_FOUND = "not-found"
UNKNOWN = "unknown"

DEFAULT_BUDGET = 100_000


@dataclass(frozen=True)
class ChordalDecomposition:
    parts: tuple          # two tuples of Terms
    vertex_sets: tuple    # label tuples, in scenario order
    expressions: tuple    # the regrouped TestExpressions

    def edge_sets(self, scenario: Scenario) -> tuple:
        return tuple(frozenset(e for e in scenario.edges if e <= set(vs))
                     for vs in self.vertex_sets)


@dataclass(frozen=True)
class DecompositionResult:
    status: str
    decomposition: ChordalDecomposition | None = None
    nodes: int = 0
    notes: tuple = field(default=())

    def __bool__(self) -> bool:
        return self.status == FOUND


def _vertices(terms) -> frozenset:
    out = set()
    for t in terms:
        out |= t.labels()
    return frozenset(out)


def nd_valid(expr: TestExpression, scenario: Scenario) -> bool:
    """Is ``expr <= 0`` implied by the ND cone of ``scenario`` (exact LP)?"""
    cone = nd_cone(scenario)
    idx = cone.index
    try:
        c = expr.coefficients(idx)
    except IndexMismatch:
        return False
    if not any(c):
        return True
    rows = list(cone.inequalities)
    A_eq = [[q.coeffs[k] for q in rows] for k in range(len(idx))]
    res = lp.solve([0] * len(rows), A_eq=A_eq, b_eq=[-v for v in c])
    return res.success


def find_chordal_2_decomposition(scenario: Scenario, expr_1: TestExpression,
                                 expr_2: TestExpression, *,
                                 budget: int = DEFAULT_BUDGET) -> DecompositionResult:
    """Assign every conditional-entropy term to one of two parts.

    A leaf is accepted when each part's labels induce a chordal subgraph of
    the scenario's compatibility graph and each part's sum is bounded by zero
    on the no-disturbance cone of that induced subgraph (maximal cliques as
    contexts). Chordality is inherited by induced subgraphs, so a branch dies
    as soon as a part becomes non-chordal. ``NOT_FOUND`` is exhaustive;
    ``UNKNOWN`` means the node budget ran out.
    """
    terms = list(expr_1.terms) + list(expr_2.terms)
    known = set(scenario.labels)
    for t in terms:
        if not t.labels() <= known:
            raise IndexMismatch(f"term {t.to_text()} uses labels outside the scenario")
        if len(t.labels()) == 2 and t.labels() not in scenario.edges:
            raise IndexMismatch(f"term {t.to_text()} pairs incompatible measurements")
    g = Graph(scenario.labels, scenario.edges)
    order = {x: i for i, x in enumerate(scenario.labels)}
    chordal_cache: dict = {}
    valid_cache: dict = {}

    def chordal(vs: frozenset) -> bool:
        if vs not in chordal_cache:
            chordal_cache[vs] = bool(is_chordal(g.subgraph(vs)))
        return chordal_cache[vs]

    def part_expr(idx: tuple, k: int) -> TestExpression:
        ts = tuple(terms[i] for i in idx)
        labs = tuple(sorted(_vertices(ts), key=order.__getitem__))
        return TestExpression(f"part{k}", labs, ts, expr_1.validity)

    def valid(idx: tuple) -> bool:
        if idx not in valid_cache:
            if not idx:
                valid_cache[idx] = True
            else:
                e = part_expr(idx, 0)
                valid_cache[idx] = nd_valid(e, scenario.induced(e.labels))
        return valid_cache[idx]

    nodes = 0
    assign: list[int] = []

    def search(k: int):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise _Budget
        if k == len(terms):
            p1 = tuple(i for i, a in enumerate(assign) if a == 0)
            p2 = tuple(i for i, a in enumerate(assign) if a == 1)
            if valid(p1) and valid(p2):
                return p1, p2
            return None
        for side in ((0,) if k == 0 else (0, 1)):
            assign.append(side)
            vs = _vertices(terms[i] for i, a in enumerate(assign) if a == side)
            if chordal(vs):
                found = search(k + 1)
                if found:
                    return found
            assign.pop()
        return None

    try:
        found = search(0)
    except _Budget:
        return DecompositionResult(UNKNOWN, nodes=nodes)
    if not found:
        return DecompositionResult(NOT_FOUND, nodes=nodes)
    exprs = tuple(part_expr(p, k + 1) for k, p in enumerate(found))
    dec = ChordalDecomposition(tuple(e.terms for e in exprs), tuple(e.labels for e in exprs), exprs)
    return DecompositionResult(FOUND, dec, nodes)


class _Budget(Exception):
    pass
