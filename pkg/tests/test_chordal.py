from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import SCENARIOS, load_scenario, markov_oracle, random_chordal_scenario
from entropic_nd.chordal import (COMPLETE, CYCLE, EULER, FOUND, KINDS, LINE2K, NOT_FOUND, STAR,
                                 UNKNOWN, MissingCliqueEntropy, NotChordal, ObservedOutsideND,
                                 PackingPiece, check_certificate, chordal_extension,
                                 clique_piece_entropy, compatibility_graph, edge_packing,
                                 find_chordal_2_decomposition, nd_valid, piece_certificate,
                                 recognize_piece)
from entropic_nd.distributions import random_distribution
from entropic_nd.graphs import Graph, is_chordal
from entropic_nd.inequalities import chain, entropic_chained_bell, monogamy_sum
from entropic_nd.polyhedra import membership, shannon_cone
from entropic_nd.scenario import (EntropyVector, IndexMismatch, n_cycle_scenario, new_scenario,
                                  project)


# -- extension ----------------------------------------------------------------------

@pytest.mark.parametrize("seed", range(25))
def test_extension_matches_markov_oracle(seed):
    rng = np.random.default_rng(seed)
    sc = random_chordal_scenario(rng, 5)
    d = random_distribution(rng, sc.labels, 2, sparsity=0.2)
    obs = d.entropy_vector(sc.observed_index)
    tables = {c: d.marginal(c) for c in sc.contexts}
    ext = chordal_extension(obs, sc, tables)
    ref = markov_oracle(sc, d).entropy_vector(sc.full_index)
    assert max(abs(a - b) for a, b in zip(ext.values, ref.values)) <= 1e-9
    assert project(ext, sc) == obs
    lp_ext = chordal_extension(obs, sc)
    assert project(lp_ext, sc) == obs
    assert membership(lp_ext, shannon_cone(sc), 1e-9)
    top = frozenset(sc.labels)
    assert abs(lp_ext[top] - ref[top]) <= 1e-9


def test_exact_extension_on_a_path():
    sc = new_scenario(["A", "B", "C"], [("A", "B"), ("B", "C")])
    obs = EntropyVector.from_mapping(sc.observed_index, {
        "A": 1, "B": 1, "C": 1, "A,B": Fraction(3, 2), "B,C": Fraction(3, 2)})
    ext = chordal_extension(obs, sc)
    assert ext.is_exact
    assert ext[("A", "B", "C")] == 2
    assert membership(ext, shannon_cone(sc))


def test_extension_errors():
    sq = n_cycle_scenario(4)
    with pytest.raises(NotChordal):
        chordal_extension(EntropyVector.zeros(sq.observed_index), sq)
    path = new_scenario(["A", "B"], [("A", "B")])
    bad = EntropyVector.from_mapping(path.observed_index, {"A": 2, "B": 0, "A,B": 1})
    with pytest.raises(ObservedOutsideND):
        chordal_extension(bad, path)
    tri = n_cycle_scenario(3)      # pair contexts only, the triangle is never observed
    with pytest.raises(MissingCliqueEntropy):
        chordal_extension(EntropyVector.zeros(tri.observed_index), tri)
    with pytest.raises(IndexMismatch):
        chordal_extension(EntropyVector.zeros(tri.full_index), path)


def test_piece_formula_on_two_triangles(rng):
    sc = new_scenario(list("ABCDE"), [("A", "B"), ("B", "C"), ("A", "C"), ("C", "D"),
                                      ("D", "E"), ("C", "E")])
    d = random_distribution(rng, sc.labels, 2)
    obs = d.entropy_vector(sc.observed_index)
    ext = chordal_extension(obs, sc, {c: d.marginal(c) for c in sc.contexts})
    val = clique_piece_entropy(obs, compatibility_graph(sc))
    assert abs(val - ext[frozenset(sc.labels)]) < 1e-9


def test_piece_formula_overcounts_at_a_shared_vertex(rng):
    # three edges meeting at A: the formula subtracts H(A) three times, the tree twice
    sc = new_scenario(list("ABCD"), [("A", "B"), ("A", "C"), ("A", "D")])
    d = random_distribution(rng, sc.labels, 2)
    obs = d.entropy_vector(sc.observed_index)
    ext = chordal_extension(obs, sc, {c: d.marginal(c) for c in sc.contexts})
    val = clique_piece_entropy(obs, compatibility_graph(sc))
    assert abs(val - (ext[frozenset(sc.labels)] - obs[("A",)])) < 1e-9


# -- decomposition ------------------------------------------------------------------

def _tests(data):
    return [chain(t["chain"], t["name"]) for t in data["tests"]]


@pytest.mark.parametrize("name", ["chsh_chsh.json", "cycle_cycle.json", "chsh_kcbs.json"])
def test_decomposition_fixtures(name):
    sc, data = load_scenario(name)
    e1, e2 = _tests(data)
    res = find_chordal_2_decomposition(sc, e1, e2)
    assert res.status == FOUND and res
    dec = res.decomposition
    g = compatibility_graph(sc)
    total = monogamy_sum([e1, e2]).functional()
    got = monogamy_sum(list(dec.expressions)).functional()
    assert got == total
    assert sorted(dec.parts[0] + dec.parts[1], key=repr) == sorted(e1.terms + e2.terms, key=repr)
    for vs, e in zip(dec.vertex_sets, dec.expressions):
        assert is_chordal(g.subgraph(vs))
        assert nd_valid(e, sc.induced(vs))
    assert all(len(es) > 0 for es in dec.edge_sets(sc))


def test_chsh_chsh_parts():
    sc, data = load_scenario("chsh_chsh.json")
    res = find_chordal_2_decomposition(sc, *_tests(data))
    assert {frozenset(v) for v in res.decomposition.vertex_sets} == {
        frozenset({"A0", "A1", "B1", "C0"}), frozenset({"A0", "A1", "B0", "C1"})}


def test_two_pentagons_not_found():
    sc, data = load_scenario("two_pentagons.json")
    res = find_chordal_2_decomposition(sc, *_tests(data))
    assert res.status == NOT_FOUND and not res


def test_decomposition_budget():
    sc, data = load_scenario("two_pentagons.json")
    res = find_chordal_2_decomposition(sc, *_tests(data), budget=5)
    assert res.status == UNKNOWN


def test_decomposition_rejects_foreign_terms():
    sc = n_cycle_scenario(4)
    with pytest.raises(IndexMismatch):
        find_chordal_2_decomposition(sc, chain(["A1", "A2", "A3"]), entropic_chained_bell(2))


# -- packing ------------------------------------------------------------------------

def E(*pairs):
    return tuple(tuple(p) for p in pairs)


@pytest.mark.parametrize("edges,kind", [
    (E("ab", "bc", "ca"), COMPLETE),
    (E("ab", "ac", "ad", "bc", "bd", "cd"), COMPLETE),
    (E("ab", "bc", "cd", "da"), CYCLE),
    (E("ab", "ac", "ad"), STAR),
    (E("ab", "bc", "cd", "de"), LINE2K),
    (E("ab", "bc", "ca", "ad", "de", "ea"), EULER),
    (E("ab", "bc", "cd"), None),
    (E("ab",), None),
])
def test_recognize_piece(edges, kind):
    assert recognize_piece(edges) == kind


def _check_packing(graph, res):
    assert res.status == FOUND
    covered = [frozenset(e) for p in res.pieces for e in p.edges]
    assert len(covered) == len(set(covered)) and set(covered) == set(graph.edges)
    for p in res.pieces:
        assert p.kind in KINDS and recognize_piece(p.graph()) == p.kind
        assert check_certificate(p.edges, piece_certificate(p))
    assert check_certificate(graph.sorted_edges(), res.certificate)


def test_five_piece_packing():
    g = Graph.parse((SCENARIOS / "five_piece.graph").read_text())
    res = edge_packing(g)
    _check_packing(g, res)
    assert len(res.pieces) == 5
    assert {p.kind for p in res.pieces} == {COMPLETE, EULER, LINE2K, STAR}


def test_star_packing_uses_half_weights():
    g = Graph.parse((SCENARIOS / "star3.graph").read_text())
    res = edge_packing(g)
    _check_packing(g, res)
    assert [p.kind for p in res.pieces] == [STAR]
    assert {t.weight for t in res.certificate} == {Fraction(1, 2)}


def test_single_edge_has_no_packing():
    assert edge_packing(Graph.from_edges([("a", "b")])).status == NOT_FOUND


def test_packing_budget():
    g = Graph.parse((SCENARIOS / "five_piece.graph").read_text())
    assert edge_packing(g, budget=1).status == UNKNOWN


def test_bad_certificates_rejected():
    p = PackingPiece(CYCLE, E("ab", "bc", "cd", "ad"))
    cert = piece_certificate(p)
    assert check_certificate(p.edges, cert)
    assert not check_certificate(p.edges, cert[:-1])
    assert not check_certificate(p.edges + (("x", "y"),), cert)


@st.composite
def small_graphs(draw):
    n = draw(st.integers(3, 7))
    vs = [f"v{i}" for i in range(n)]
    pairs = [(vs[i], vs[j]) for i in range(n) for j in range(i + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges([p for p, k in zip(pairs, mask) if k] or [pairs[0]])


@settings(max_examples=60, deadline=None)
@given(small_graphs())
def test_packings_are_valid_partitions(g):
    res = edge_packing(g, budget=20_000)
    if res.status == FOUND:
        _check_packing(g, res)
    if any(len(c) == 2 for c in g.components()):
        assert res.status == NOT_FOUND      # an isolated edge fits in no piece
