from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entropic_nd.distributions import random_distribution
from entropic_nd.inequalities import (LHV, InconsistentIdentification, NotValid, Term,
                                      TestExpression, catalog, chain, entropic_chained_bell,
                                      entropic_cycle, evaluate_expression, monogamy_sum,
                                      recollect, scenario_for, verify_nchv_bound)
from entropic_nd.polyhedra import membership, shannon_cone
from entropic_nd.scenario import (EntropyVector, IndexMismatch, chained_bell_scenario,
                                  n_cycle_scenario, new_scenario)


def fs(*xs):
    return frozenset(xs)


def test_cycle3_expansion():
    e = entropic_cycle(3)
    assert e.functional() == {fs("A1", "A3"): 1, fs("A1", "A2"): -1, fs("A2"): 1,
                              fs("A2", "A3"): -1}
    assert e.to_text() == "H(A1|A3) - H(A1|A2) - H(A2|A3) <= 0"


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_cycle_on_classical_extremes(n):
    sc = n_cycle_scenario(n)
    e = entropic_cycle(n)
    # perfectly correlated uniform bits: every conditional entropy is 0
    corr = EntropyVector(sc.observed_index, tuple(1 for _ in sc.observed_index))
    assert evaluate_expression(e, corr) == 0
    # independent uniform bits: H(X|Y) = 1 for every pair
    indep = EntropyVector(sc.observed_index, tuple(len(s) for s in sc.observed_index))
    assert evaluate_expression(e, indep) == 2 - n


def test_chsh_expression():
    e = entropic_chained_bell(2)
    assert e.name == "chsh" and e.validity == LHV
    assert e.to_text() == "H(A0|B1) - H(A0|B0) - H(B0|A1) - H(A1|B1) <= 0"
    assert evaluate_expression(e, EntropyVector.zeros(chained_bell_scenario(2).observed_index)) == 0


def test_chained3_terms_follow_the_6_cycle():
    e = entropic_chained_bell(3)
    assert len(e.terms) == 6
    sc = chained_bell_scenario(3)
    assert all(t.labels() in sc.edges for t in e.terms)
    assert {t.labels() for t in e.terms} == set(sc.edges)


def test_invalid_sizes():
    with pytest.raises(ValueError):
        entropic_cycle(2)
    with pytest.raises(ValueError):
        entropic_chained_bell(1)
    with pytest.raises(ValueError):
        chain(["A", "B"])
    with pytest.raises(KeyError):
        catalog("nonsense")


def test_catalog_names():
    assert catalog("kcbs").functional() == entropic_cycle(5).functional()
    assert catalog("CHSH").name == "chsh"
    assert catalog("cycle4").name == "cycle4"
    assert catalog("chained3").name == "chained3"


def test_main_variant_is_star_shaped():
    e = entropic_cycle(4, variant="main")
    assert all("A1" in t.labels() for t in e.terms)
    sc = scenario_for(e)
    verify_nchv_bound(e, sc).check()


# -- monogamy sums ------------------------------------------------------------------

def test_two_chsh_sharing_alice():
    chsh = entropic_chained_bell(2)
    total = monogamy_sum([chsh, chsh], [None, {"B0": "C0", "B1": "C1"}])
    assert total.labels == ("A0", "A1", "B0", "B1", "C0", "C1")
    assert len(total.terms) == 8
    assert total.validity == LHV


def test_two_cycles_with_shared_labels():
    c = entropic_cycle(5)
    c2 = entropic_cycle(5, prefix="P")
    total = monogamy_sum([c, c2], [None, {"P2": "A2", "P5": "A5"}])
    assert set(total.labels) == {"A1", "A2", "A3", "A4", "A5", "P1", "P3", "P4"}
    ref = chain(["A1", "A2", "A3", "A4", "A5"]).functional()
    for s, v in chain(["P1", "A2", "P3", "P4", "A5"]).functional().items():
        ref[s] = ref.get(s, 0) + v
    assert total.functional() == {s: v for s, v in ref.items() if v}


def test_sum_with_negation_is_zero():
    e = entropic_cycle(5)
    assert monogamy_sum([e, e.negated()]).is_zero()


def test_bad_identifications():
    e = entropic_chained_bell(2)
    with pytest.raises(InconsistentIdentification):
        monogamy_sum([e, e], [None, {"B0": "C0", "B1": "C0"}])
    with pytest.raises(InconsistentIdentification):
        monogamy_sum([e, e], [None, {"Z": "C0"}])
    with pytest.raises(InconsistentIdentification):
        monogamy_sum([e, e], [None])


labels4 = ["A", "B", "C", "D"]
terms = st.builds(Term, st.sampled_from([1, -1]), st.sampled_from(labels4),
                  st.sampled_from(labels4 + [None])).filter(lambda t: t.target != t.given)


@settings(max_examples=100, deadline=None)
@given(st.lists(terms, min_size=1, max_size=5), st.lists(terms, min_size=1, max_size=5),
       st.integers(0, 10 ** 6))
def test_sum_commutes_with_evaluation(t1, t2, seed):
    e1 = TestExpression("e1", tuple(labels4), tuple(t1))
    e2 = TestExpression("e2", tuple(labels4), tuple(t2))
    rng = np.random.default_rng(seed)
    d = random_distribution(rng, labels4, 2)
    from entropic_nd.scenario import SubsetIndex
    h = d.entropy_vector(SubsetIndex.full(labels4))
    lhs = evaluate_expression(monogamy_sum([e1, e2]), h)
    assert abs(lhs - evaluate_expression(e1, h) - evaluate_expression(e2, h)) < 1e-12


@settings(max_examples=100, deadline=None)
@given(st.lists(terms, min_size=1, max_size=5))
def test_recollect_inverts_expansion(ts):
    e = TestExpression("e", tuple(labels4), tuple(ts))
    back = recollect(e.functional(), e.terms)
    assert back == e.terms or TestExpression("r", e.labels, back).functional() == e.functional()


def test_recollect_finds_other_conditioning():
    # the skeleton conditions the first term the other way round
    target = TestExpression("t", ("A", "B", "C"), (Term(1, "B", "A"), Term(-1, "B", "C"))).functional()
    got = recollect(target, (Term(1, "A", "B"), Term(-1, "B", "C")))
    assert got == (Term(1, "B", "A"), Term(-1, "B", "C"))
    assert recollect({fs("A"): 5}, (Term(1, "A", "B"),)) is None


# -- classical soundness ------------------------------------------------------------

@pytest.mark.parametrize("name,sc", [("kcbs", n_cycle_scenario(5)), ("cycle4", n_cycle_scenario(4)),
                                     ("chsh", chained_bell_scenario(2))])
def test_catalog_nonpositive_on_distributions(name, sc):
    e = catalog(name)
    rng = np.random.default_rng(7)
    for _ in range(100):
        d = random_distribution(rng, sc.labels, cards=int(rng.integers(2, 4)), sparsity=0.2)
        assert evaluate_expression(e, d.entropy_vector(sc.observed_index)) <= 1e-12


# -- certificates -------------------------------------------------------------------

@pytest.mark.parametrize("expr,sc", [(entropic_cycle(3), n_cycle_scenario(3)),
                                     (entropic_cycle(4), n_cycle_scenario(4)),
                                     (entropic_chained_bell(2), chained_bell_scenario(2))])
def test_certificates_recheck(expr, sc):
    cert = verify_nchv_bound(expr, sc)
    assert cert.check()
    assert all(lam > 0 and isinstance(lam, Fraction) for lam, _ in cert.multipliers)
    assert "*" in cert.to_text()


def test_tampered_certificate_fails():
    cert = verify_nchv_bound(entropic_cycle(3), n_cycle_scenario(3))
    lam, t = cert.multipliers[0]
    bad = type(cert)(cert.expression, cert.index, ((lam * 2, t),) + cert.multipliers[1:])
    assert not bad.check()


def test_negated_cycle_is_not_valid():
    sc = n_cycle_scenario(4)
    with pytest.raises(NotValid) as err:
        verify_nchv_bound(entropic_cycle(4).negated(), sc)
    w = err.value.witness
    assert err.value.value > 0
    assert membership(w, shannon_cone(sc))
    assert evaluate_expression(entropic_cycle(4).negated(), w) == err.value.value
    assert sum(w.values) == 1


def test_expression_outside_scenario():
    with pytest.raises(IndexMismatch):
        verify_nchv_bound(entropic_cycle(5), n_cycle_scenario(4))
    sq = new_scenario(["A1", "A2", "A3"], [("A1", "A2"), ("A2", "A3")])
    with pytest.raises(IndexMismatch):
        verify_nchv_bound(entropic_cycle(3), sq)
