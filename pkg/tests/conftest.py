import json
from pathlib import Path

import numpy as np
import pytest

from entropic_nd.scenario import Scenario

ROOT = Path(__file__).resolve().parents[1]
SCENARIOS = ROOT / "scenarios"
GOLDEN = Path(__file__).resolve().parent / "golden"


def load_scenario(name: str) -> tuple[Scenario, dict]:
    text = (SCENARIOS / name).read_text()
    return Scenario.from_json(text), json.loads(text)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_chordal_scenario(rng, n_max: int = 6):
    """Chordal compatibility graph grown by attaching each vertex to a clique."""
    from entropic_nd.scenario import new_scenario

    n = int(rng.integers(2, n_max + 1))
    labels = [f"X{i}" for i in range(n)]
    adj = {i: set() for i in range(n)}
    for i in range(1, n):
        if rng.random() < 0.15:
            continue
        v = int(rng.integers(0, i))
        clique = [v]
        for w in sorted(adj[v]):
            if all(w in adj[x] for x in clique) and rng.random() < 0.6:
                clique.append(w)
        for x in clique:
            adj[x].add(i)
            adj[i].add(x)
    edges = [(labels[a], labels[b]) for a in range(n) for b in adj[a] if a < b]
    return new_scenario(labels, edges)


def markov_oracle(scenario, dist):
    """Junction-tree distribution built with networkx and explicit outcome loops."""
    from itertools import product

    import networkx as nx
    from entropic_nd.distributions import Distribution

    g = nx.Graph()
    g.add_nodes_from(scenario.labels)
    g.add_edges_from(tuple(e) for e in scenario.edges)
    cliques = [frozenset(c) for c in nx.find_cliques(g)]
    t = nx.Graph()
    t.add_nodes_from(range(len(cliques)))
    for i in range(len(cliques)):
        for j in range(i + 1, len(cliques)):
            t.add_edge(i, j, weight=len(cliques[i] & cliques[j]))
    tree = nx.maximum_spanning_tree(t)
    seps = [cliques[i] & cliques[j] for i, j in tree.edges]
    labels = list(scenario.labels)
    shape = dist.probs.shape
    margs = {}

    def p(subset, outcome):
        if not subset:
            return 1.0
        key = frozenset(subset)
        if key not in margs:
            margs[key] = dist.marginal(key)
        m = margs[key]
        return float(m.probs[tuple(outcome[labels.index(x)] for x in m.labels)])

    out = np.zeros(shape)
    for o in product(*(range(k) for k in shape)):
        num = np.prod([p(c, o) for c in cliques])
        den = np.prod([p(s, o) for s in seps])
        out[o] = num / den if den > 0 else 0.0
    return Distribution(tuple(labels), out / out.sum())


ACCEPTANCE_LINES: list[str] = []


def report(k: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
