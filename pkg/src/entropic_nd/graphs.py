"""Simple undirected graphs: chordality, maximal cliques and junction trees."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence


class NotChordal(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    vertices: tuple
    edges: frozenset

    def __init__(self, vertices: Iterable, edges: Iterable = ()):
        verts = tuple(vertices)
        if len(set(verts)) != len(verts):
            raise ValueError("duplicate vertices")
        known = set(verts)
        es = set()
        for e in edges:
            u, v = tuple(e)
            if u == v:
                raise ValueError(f"self-loop on {u!r}")
            if u not in known or v not in known:
                raise ValueError(f"edge {u!r}-{v!r} references unknown vertex")
            es.add(frozenset((u, v)))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", frozenset(es))

    @classmethod
    def from_edges(cls, edges: Iterable) -> "Graph":
        edges = [tuple(e) for e in edges]
        verts = []
        for e in edges:
            for x in e:
                if x not in verts:
                    verts.append(x)
        return cls(verts, edges)

    def adjacency(self) -> dict:
        adj = {v: set() for v in self.vertices}
        for e in self.edges:
            u, v = tuple(e)
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def order(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    def sorted_edges(self) -> list[tuple]:
        pos = self.order()
        out = [tuple(sorted(e, key=pos.__getitem__)) for e in self.edges]
        return sorted(out, key=lambda e: (pos[e[0]], pos[e[1]]))

    def subgraph(self, vertices: Iterable) -> "Graph":
        keep = set(vertices)
        verts = [v for v in self.vertices if v in keep]
        return Graph(verts, [e for e in self.edges if e <= keep])

    def edge_subgraph(self, edges: Iterable) -> "Graph":
        edges = [frozenset(e) for e in edges]
        touched = set().union(*edges) if edges else set()
        return Graph([v for v in self.vertices if v in touched], edges)

    def components(self) -> list[list]:
        adj = self.adjacency()
        seen, comps = set(), []
        for v in self.vertices:
            if v in seen:
                continue
            comp, todo = [], [v]
            seen.add(v)
            while todo:
                x = todo.pop()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        todo.append(y)
            pos = self.order()
            comps.append(sorted(comp, key=pos.__getitem__))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    @classmethod
    def parse(cls, text: str) -> "Graph":
        """Read either a JSON document with ``edges`` or ``u -- v`` lines."""
        stripped = text.strip()
        if stripped.startswith("{"):
            data = json.loads(stripped)
            edges = [tuple(map(str, e)) for e in data.get("edges", [])]
            labels = data.get("labels") or data.get("vertices")
            if labels:
                return cls([str(x) for x in labels], edges)
            return cls.from_edges(edges)
        verts, edges = [], []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip().rstrip(";")
            if not line:
                continue
            if "--" not in line:
                name = line.strip()
                if len(name.split()) != 1:
                    raise ValueError(f"bad line: {raw!r}")
                if name not in verts:
                    verts.append(name)
                continue
            u, v = (p.strip() for p in line.split("--", 1))
            if not u or not v:
                raise ValueError(f"bad edge line: {raw!r}")
            for x in (u, v):
                if x not in verts:
                    verts.append(x)
            edges.append((u, v))
        return cls(verts, edges)

    def to_text(self) -> str:
        return "".join(f"{u} -- {v}\n" for u, v in self.sorted_edges())


def lex_bfs(graph: Graph) -> list:
    """Lexicographic breadth-first search order (first visited first)."""
    adj = graph.adjacency()
    pos = graph.order()
    n = len(graph.vertices)
    label = {v: [] for v in graph.vertices}
    unvisited = set(graph.vertices)
    order = []
    for step in range(n, 0, -1):
        v = max(unvisited, key=lambda x: (label[x], -pos[x]))
        unvisited.remove(v)
        order.append(v)
        for w in adj[v]:
            if w in unvisited:
                label[w].append(step)
    return order


def _is_clique(vs, adj) -> bool:
    return all(b in adj[a] for a, b in combinations(vs, 2))


def is_perfect_elimination_ordering(graph: Graph, order: Sequence) -> bool:
    adj = graph.adjacency()
    rank = {v: i for i, v in enumerate(order)}
    return all(_is_clique([w for w in adj[v] if rank[w] > rank[v]], adj) for v in order)


def _induced_cycle(graph: Graph) -> list | None:
    adj = graph.adjacency()
    pos = graph.order()
    for v in graph.vertices:
        nbrs = sorted(adj[v], key=pos.__getitem__)
        for u, w in combinations(nbrs, 2):
            if w in adj[u]:
                continue
            blocked = (adj[v] | {v}) - {u, w}
            prev = {u: None}
            q = deque([u])
            while q and w not in prev:
                x = q.popleft()
                for y in sorted(adj[x], key=pos.__getitem__):
                    if y not in prev and y not in blocked:
                        prev[y] = x
                        q.append(y)
            if w in prev:
                path, x = [], w
                while x is not None:
                    path.append(x)
                    x = prev[x]
                return [v] + path[::-1]
    return None


@dataclass(frozen=True)
class ChordalityResult:
    chordal: bool
    elimination_order: tuple | None = None
    induced_cycle: tuple | None = None

    def __bool__(self) -> bool:
        return self.chordal


def is_chordal(graph: Graph) -> ChordalityResult:
    """Chordality test via LexBFS.

    Returns a perfect elimination ordering for chordal graphs, otherwise an
    induced cycle of length at least four.
    """
    peo = lex_bfs(graph)[::-1]
    if is_perfect_elimination_ordering(graph, peo):
        return ChordalityResult(True, elimination_order=tuple(peo))
    cycle = _induced_cycle(graph)
    assert cycle is not None and len(cycle) >= 4
    return ChordalityResult(False, induced_cycle=tuple(cycle))


def _sort_cliques(graph: Graph, cliques) -> list[tuple]:
    pos = graph.order()
    out = [tuple(sorted(c, key=pos.__getitem__)) for c in cliques]
    return sorted(set(out), key=lambda c: [pos[x] for x in c])


def maximal_cliques(graph: Graph) -> list[tuple]:
    """All maximal cliques, each sorted by vertex order; deterministic list order."""
    if not graph.vertices:
        return []
    adj = graph.adjacency()
    res = is_chordal(graph)
    if res.chordal:
        rank = {v: i for i, v in enumerate(res.elimination_order)}
        cands = [frozenset([v] + [w for w in adj[v] if rank[w] > rank[v]])
                 for v in res.elimination_order]
        cliques = [c for c in cands if not any(c < d for d in cands)]
        return _sort_cliques(graph, cliques)

    # Bron-Kerbosch with pivoting
    cliques = []

    def expand(r, p, x):
        if not p and not x:
            cliques.append(r)
            return
        pivot = max(p | x, key=lambda u: len(adj[u] & p))
        for v in list(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    expand(frozenset(), frozenset(graph.vertices), frozenset())
    return _sort_cliques(graph, cliques)


@dataclass(frozen=True)
class JunctionTree:
    """Clique tree (forest for disconnected graphs) of a chordal graph."""

    nodes: tuple          # maximal cliques as sorted tuples
    tree_edges: tuple     # (i, j, separator) with i < j

    def separators(self) -> list[frozenset]:
        return [frozenset(s) for _, _, s in self.tree_edges]

    def neighbours(self, i) -> list[int]:
        out = []
        for a, b, _ in self.tree_edges:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return sorted(out)

    def path(self, i: int, j: int) -> list[int] | None:
        prev = {i: None}
        q = deque([i])
        while q:
            x = q.popleft()
            if x == j:
                break
            for y in self.neighbours(x):
                if y not in prev:
                    prev[y] = x
                    q.append(y)
        if j not in prev:
            return None
        out, x = [], j
        while x is not None:
            out.append(x)
            x = prev[x]
        return out[::-1]

    def has_running_intersection(self) -> bool:
        for i, j in combinations(range(len(self.nodes)), 2):
            common = set(self.nodes[i]) & set(self.nodes[j])
            p = self.path(i, j)
            if p is None:
                if common:
                    return False
                continue
            if any(not common <= set(self.nodes[k]) for k in p):
                return False
        return True

    def rooted(self) -> list[tuple[int, int | None]]:
        """Breadth-first (node, parent) order covering every component."""
        seen, out = set(), []
        for r in range(len(self.nodes)):
            if r in seen:
                continue
            seen.add(r)
            q = deque([(r, None)])
            while q:
                x, par = q.popleft()
                out.append((x, par))
                for y in self.neighbours(x):
                    if y not in seen:
                        seen.add(y)
                        q.append((y, x))
        return out


def junction_tree(graph: Graph) -> JunctionTree:
    """Maximum-weight spanning tree of the clique graph (weights = separator sizes)."""
    if not is_chordal(graph):
        raise NotChordal("junction trees exist only for chordal graphs")
    cliques = maximal_cliques(graph)
    cand = []
    for i, j in combinations(range(len(cliques)), 2):
        sep = set(cliques[i]) & set(cliques[j])
        if sep:
            cand.append((-len(sep), i, j))
    cand.sort()
    parent = list(range(len(cliques)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pos = graph.order()
    edges = []
    for _, i, j in cand:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            sep = tuple(sorted(set(cliques[i]) & set(cliques[j]), key=pos.__getitem__))
            edges.append((i, j, sep))
    return JunctionTree(tuple(cliques), tuple(edges))
