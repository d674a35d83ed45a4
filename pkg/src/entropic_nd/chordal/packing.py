"""Edge packings of party graphs into pieces with CHSH monogamy certificates.

A piece is an edge set whose CHSH tests sum to a non-positive quantity: its
edges can be paired (with weight 1) or arranged in a cycle of adjacent
edges (each consecutive pair with weight 1/2) so that every pair shares a
party, and two CHSH tests sharing a party are monogamous.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from ..graphs import Graph

COMPLETE = "Complete"
CYCLE = "Cycle"
STAR = "Star"
LINE2K = "Line2k"
EULER = "Euler"

KINDS = (COMPLETE, CYCLE, STAR, LINE2K, EULER)

FOUND = "found"
NOT_FOUND = "not-found"
UNKNOWN = "unknown"

DEFAULT_BUDGET = 200_000


def _edge_key(order):
    return lambda e: tuple(sorted(order[x] for x in e))


def _degrees(edges) -> dict:
    deg: dict = {}
    for e in edges:
        for x in e:
            deg[x] = deg.get(x, 0) + 1
    return deg


def _connected(edges) -> bool:
    edges = list(edges)
    if not edges:
        return False
    adj: dict = {}
    for e in edges:
        u, v = tuple(e)
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    start = next(iter(adj))
    seen, todo = {start}, [start]
    while todo:
        x = todo.pop()
        for y in adj[x] - seen:
            seen.add(y)
            todo.append(y)
    return len(seen) == len(adj)


def recognize_piece(graph: Graph | frozenset | set | list) -> str | None:
    """Most specific kind in the order Complete, Cycle, Star, Line2k, Euler."""
    edges = frozenset(graph.edges if isinstance(graph, Graph) else map(frozenset, graph))
    if not edges:
        return None
    deg = _degrees(edges)
    nv, ne = len(deg), len(edges)
    conn = _connected(edges)
    if nv >= 3 and ne == nv * (nv - 1) // 2:
        return COMPLETE
    if conn and ne >= 3 and all(d == 2 for d in deg.values()):
        return CYCLE
    if ne >= 2 and set.intersection(*(set(e) for e in edges)):
        return STAR
    if (conn and ne >= 2 and ne % 2 == 0 and ne == nv - 1
            and all(d <= 2 for d in deg.values())):
        return LINE2K
    if conn and all(d % 2 == 0 for d in deg.values()):
        return EULER
    return None


@dataclass(frozen=True)
class PackingPiece:
    kind: str
    edges: tuple          # sorted label pairs

    def graph(self) -> Graph:
        return Graph.from_edges(self.edges)

    def to_text(self) -> str:
        return f"{self.kind}: " + ", ".join(f"{u}-{v}" for u, v in self.edges)


@dataclass(frozen=True)
class PairTerm:
    """``weight * (B_e + B_f) <= 0`` for two tests sharing party ``shared``."""

    weight: Fraction
    e: tuple
    f: tuple
    shared: str


@dataclass(frozen=True)
class PackingResult:
    status: str
    pieces: tuple = ()
    certificate: tuple = ()      # PairTerm entries
    nodes: int = 0

    def __bool__(self) -> bool:
        return self.status == FOUND


# -- certificates ----------------------------------------------------------------

def _line_adjacent(e, f) -> str | None:
    common = set(e) & set(f)
    return min(common) if common else None


def _matching(edges: list) -> list | None:
    """Perfect matching of the line graph (pairs of adjacent edges)."""
    if not edges:
        return []
    e = edges[0]
    for k in range(1, len(edges)):
        f = edges[k]
        if _line_adjacent(e, f) is not None:
            rest = _matching(edges[1:k] + edges[k + 1:])
            if rest is not None:
                return [(e, f)] + rest
    return None


def _hamiltonian(edges: list) -> list | None:
    """Cycle through all edges, consecutive edges adjacent."""
    n = len(edges)
    path, used = [edges[0]], {0}

    def extend():
        if len(path) == n:
            return _line_adjacent(path[-1], path[0]) is not None
        for k in range(n):
            if k not in used and _line_adjacent(path[-1], edges[k]) is not None:
                used.add(k)
                path.append(edges[k])
                if extend():
                    return True
                path.pop()
                used.discard(k)
        return False

    return list(path) if extend() else None


def piece_certificate(piece: PackingPiece) -> tuple | None:
    """Pair terms summing to the piece's CHSH sum; None if none exists."""
    edges = [tuple(e) for e in piece.edges]
    if len(edges) % 2 == 0:
        m = _matching(edges)
        if m is None:
            return None
        return tuple(PairTerm(Fraction(1), e, f, _line_adjacent(e, f)) for e, f in m)
    if len(edges) < 3:
        return None
    cyc = _hamiltonian(edges)
    if cyc is None:
        return None
    half = Fraction(1, 2)
    return tuple(PairTerm(half, cyc[i], cyc[(i + 1) % len(cyc)],
                          _line_adjacent(cyc[i], cyc[(i + 1) % len(cyc)]))
                 for i in range(len(cyc)))


def check_certificate(edges, certificate) -> bool:
    """Every pair shares its stated party and every edge gets total weight 1."""
    want = {frozenset(e) for e in edges}
    got: dict = {}
    for t in certificate:
        if t.weight <= 0 or t.shared not in set(t.e) & set(t.f) or t.e == t.f:
            return False
        for x in (t.e, t.f):
            got[frozenset(x)] = got.get(frozenset(x), 0) + t.weight
    return set(got) == want and all(v == 1 for v in got.values())


# -- candidate pieces ----------------------------------------------------------

def _adjacency(edges) -> dict:
    adj: dict = {}
    for e in edges:
        u, v = tuple(e)
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return adj


def _cycles_through(e, adj, order, max_len=12, cap=200):
    u, v = sorted(e, key=order.__getitem__)
    out = []

    def walk(path, seen):
        if len(out) >= cap:
            return
        x = path[-1]
        for y in sorted(adj.get(x, ()), key=order.__getitem__):
            if y == u and len(path) >= 3:
                out.append(list(path))
            elif y not in seen and len(path) < max_len:
                seen.add(y)
                path.append(y)
                walk(path, seen)
                path.pop()
                seen.discard(y)

    walk([u, v], {u, v})
    return [frozenset(frozenset((c[i], c[(i + 1) % len(c)])) for i in range(len(c)))
            for c in out]


def _paths_through(e, adj, order, max_len=8, cap=200):
    """Simple paths of even length containing ``e``."""
    u, v = sorted(e, key=order.__getitem__)
    nb = lambda x: sorted(adj.get(x, ()), key=order.__getitem__)  # noqa: E731
    res = []

    def left(path, seen):
        if len(res) >= cap:
            return
        nedges = len(path) - 1
        if nedges >= 2 and nedges % 2 == 0:
            es = frozenset(frozenset((path[i], path[i + 1])) for i in range(nedges))
            if es not in res:
                res.append(es)
        if nedges >= max_len:
            return
        for y in nb(path[0]):
            if y not in seen:
                left([y] + path, seen | {y})

    def right(path, seen):
        left(path, seen)
        if len(path) - 1 >= max_len:
            return
        for y in nb(path[-1]):
            if y not in seen:
                right(path + [y], seen | {y})

    right([u, v], {u, v})
    return res


def _cliques_with(e, adj):
    u, v = tuple(e)
    common = (adj.get(u, set()) & adj.get(v, set()))
    out = []

    def expand(clique, cand):
        ext = False
        for w in sorted(cand):
            if all(w in adj[x] for x in clique):
                ext = True
                expand(clique | {w}, {c for c in cand if c != w and c in adj[w]})
        if not ext and len(clique) >= 3:
            out.append(frozenset(clique))

    expand({u, v}, common)
    uniq = []
    for c in out:
        if c not in uniq:
            uniq.append(c)
    res = []
    for c in uniq:
        res.append(frozenset(frozenset(p) for p in combinations(sorted(c), 2)))
        for w in sorted(c - {u, v}):
            tri = frozenset(frozenset(p) for p in combinations(sorted({u, v, w}), 2))
            if tri not in res:
                res.append(tri)
    return res


def _candidates(e, remaining: frozenset, order) -> list:
    adj = _adjacency(remaining)
    cands = set()
    cands.update(_cliques_with(e, adj))
    cycles = _cycles_through(e, adj, order)
    cands.update(cycles)
    for x in e:
        star = frozenset(f for f in remaining if x in f)
        if len(star) >= 2:
            cands.add(star)
            for f in star - {e}:
                cands.add(frozenset({e, f}))
    cands.update(_paths_through(e, adj, order))
    # Euler pieces: Eulerian component, and two edge-disjoint cycles through a vertex
    comp = _component_edges(e, remaining)
    if all(d % 2 == 0 for d in _degrees(comp).values()):
        cands.add(comp)
    for c1 in cycles:
        verts = set().union(*c1)
        rest = remaining - c1
        radj = _adjacency(rest)
        for x in sorted(verts, key=order.__getitem__):
            for y in sorted(radj.get(x, ()), key=order.__getitem__):
                for c2 in _cycles_through(frozenset((x, y)), radj, order, cap=20):
                    cands.add(c1 | c2)
    out = []
    for c in cands:
        kind = recognize_piece(c)
        if kind is None or e not in c:
            continue
        if kind == COMPLETE and len(c) >= 6:
            tier = 0          # keep cliques on four or more vertices whole
        elif kind in (COMPLETE, CYCLE, EULER):
            tier = 1
        else:
            tier = 2
        out.append((tier, -len(c), KINDS.index(kind),
                    sorted(sorted(order[x] for x in f) for f in c), c, kind))
    out.sort(key=lambda t: t[:4])
    return [(c, kind) for *_, c, kind in out]


def _component_edges(e, remaining):
    adj = _adjacency(remaining)
    start = next(iter(e))
    seen, todo = {start}, [start]
    while todo:
        x = todo.pop()
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return frozenset(f for f in remaining if f <= seen)


def edge_packing(party_graph: Graph, *, budget: int = DEFAULT_BUDGET) -> PackingResult:
    """Partition the edges into recognized pieces, each with a pair certificate.

    Backtracking on the lowest uncovered edge; candidates containing it are
    tried with cycles, complete and Euler pieces first (largest first), then
    stars and even lines. ``NOT_FOUND`` means the candidate space is
    exhausted; ``UNKNOWN`` means the node budget ran out.
    """
    order = party_graph.order()
    key = _edge_key(order)
    all_edges = frozenset(party_graph.edges)
    nodes = 0
    chosen: list = []

    def search(remaining: frozenset) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise _Budget
        if not remaining:
            return True
        e = min(remaining, key=key)
        for c, kind in _candidates(e, remaining, order):
            piece = PackingPiece(kind, tuple(tuple(sorted(f, key=order.__getitem__))
                                             for f in sorted(c, key=key)))
            cert = piece_certificate(piece)
            if cert is None:
                continue
            chosen.append((piece, cert))
            if search(remaining - c):
                return True
            chosen.pop()
        return False

    try:
        ok = search(all_edges)
    except _Budget:
        return PackingResult(UNKNOWN, nodes=nodes)
    if not ok:
        return PackingResult(NOT_FOUND, nodes=nodes)
    pieces = tuple(p for p, _ in chosen)
    cert = tuple(t for _, c in chosen for t in c)
    return PackingResult(FOUND, pieces, cert, nodes)


class _Budget(Exception):
    pass
