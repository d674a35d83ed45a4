from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from scipy.optimize import linprog

from conftest import GOLDEN
from entropic_nd.distributions import full_entropy_vector, random_distribution
from entropic_nd.polyhedra import (DERIVED, ELEMENTAL, Cone, LinearInequality,
                                   ProjectionLimitExceeded, check_farkas, elemental_inequalities,
                                   extension_feasible, fm_eliminate, is_redundant, membership,
                                   nd_cone, normalize_coeffs, parse_inequality, project_cone,
                                   remove_redundant, shannon_cone, solve)
from entropic_nd.scenario import (EntropyVector, IndexMismatch, SubsetIndex,
                                  chained_bell_scenario, n_cycle_scenario, new_scenario, project)


# -- coefficients and parsing -----------------------------------------------------

@given(st.lists(st.fractions(max_denominator=12), min_size=1, max_size=6))
def test_normalize_is_primitive_positive_rescaling(v):
    assume(any(v))
    w = normalize_coeffs(v)
    assert all(isinstance(x, int) for x in w)
    assert np.gcd.reduce([abs(x) for x in w]) == 1
    k = next(i for i, x in enumerate(v) if x)
    ratio = Fraction(w[k]) / v[k]
    assert ratio > 0 and all(Fraction(x) == ratio * y for x, y in zip(w, v))


def test_zero_inequality_rejected():
    with pytest.raises(ValueError):
        normalize_coeffs([0, 0])


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_elemental_count(n):
    assert len(elemental_inequalities(n)) == n + comb(n, 2) * 2 ** max(n - 2, 0)


def test_parse_roundtrip_on_golden_file():
    sc = chained_bell_scenario(2)
    text = (GOLDEN / "chsh.facets").read_text()
    ineqs = [parse_inequality(sc.observed_index, line) for line in text.splitlines()]
    assert "".join(q.to_text() + "\n" for q in ineqs) == text
    with pytest.raises(ValueError):
        parse_inequality(sc.observed_index, "+1 H(A0) <= 0")


def test_restrict_and_lift():
    sc = n_cycle_scenario(3)
    q = LinearInequality.from_terms(sc.full_index, {frozenset(["A1"]): 1})
    r = q.restricted(sc.observed_index)
    assert r.lifted(sc.full_index) == q
    bad = LinearInequality.from_terms(sc.full_index, {frozenset(sc.labels): 1})
    with pytest.raises(IndexMismatch):
        bad.restricted(sc.observed_index)


# -- elemental inequalities hold on true entropy vectors -------------------------

@pytest.mark.parametrize("seed", range(20))
def test_elementals_hold_on_distributions(seed):
    rng = np.random.default_rng(seed)
    d = random_distribution(rng, ["X1", "X2", "X3", "X4"], cards=[2, 3, 2, 3], sparsity=0.3)
    h = full_entropy_vector(d)
    cone = shannon_cone(4)
    h = EntropyVector(cone.index, h.values)
    assert membership(h, cone, 1e-12)


# -- exact LP ----------------------------------------------------------------------

small = st.integers(-4, 4)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_exact_lp_agrees_with_highs(n, m, data):
    A = [[data.draw(small) for _ in range(n)] for _ in range(m)]
    b = [data.draw(st.integers(-3, 6)) for _ in range(m)]
    c = [data.draw(small) for _ in range(n)]
    res = solve(c, A, b)
    ref = linprog([-x for x in c], A_ub=A, b_ub=b, bounds=(0, None), method="highs")
    if ref.status == 0:
        assert res.success
        assert abs(float(res.value) + ref.fun) < 1e-7
        assert all(sum(Fraction(a) * x for a, x in zip(row, res.x)) <= bi
                   for row, bi in zip(A, b))
        # strong duality with the returned multipliers
        assert sum(y * bi for y, bi in zip(res.dual, b)) == res.value
    elif ref.status == 2:
        assert res.status == "infeasible"
        assert check_farkas(res.farkas, A, b)
    else:
        assert res.status == "unbounded"


def test_exact_lp_equality_rows():
    res = solve([1, 1], A_eq=[[1, 2]], b_eq=[Fraction(3, 2)])
    assert res.success and res.value == Fraction(3, 2)
    res = solve([0], A_eq=[[1]], b_eq=[-1])
    assert res.status == "infeasible"
    assert check_farkas(res.farkas, A_eq=[[1]], b_eq=[-1])


# -- Fourier-Motzkin ----------------------------------------------------------------

def test_fm_two_variable_example():
    idx = SubsetIndex.full(["A", "B"])
    a, b, ab = (frozenset(x) for x in (["A"], ["B"], ["A", "B"]))
    cone = Cone(idx, [LinearInequality.from_terms(idx, t)
                      for t in ({ab: 1, a: -1}, {a: 1, b: -1}, {b: 1})])
    out = fm_eliminate(cone, a)
    assert {q.to_text() for q in out} == {"+1 H(B) >= 0", "-1 H(B) +1 H(A,B) >= 0"}


def test_projection_of_two_variables():
    sc = new_scenario(["A", "B"], [])
    cone = project_cone(shannon_cone(sc), sc.observed_index)
    assert [q.to_text() for q in cone] == ["+1 H(A) >= 0", "+1 H(B) >= 0"]


def test_golden_projection_triangle():
    sc = n_cycle_scenario(3)
    cone = project_cone(shannon_cone(sc), sc.observed_index)
    assert cone.to_text() == (GOLDEN / "triangle.facets").read_text()
    assert set(cone.provenance) <= {ELEMENTAL, DERIVED}


def test_projection_cap():
    sc = chained_bell_scenario(2)
    with pytest.raises(ProjectionLimitExceeded) as err:
        project_cone(shannon_cone(sc), sc.observed_index, max_inequalities=20)
    assert err.value.cap == 20


def test_projected_facets_are_implied_by_elementals():
    sc = chained_bell_scenario(2)
    proj = project_cone(shannon_cone(sc), sc.observed_index)
    elems = [q.coeffs for q in shannon_cone(sc)]
    for q in proj:
        assert is_redundant(q.lifted(sc.full_index).coeffs, elems)


def test_remove_redundant_is_idempotent():
    sc = n_cycle_scenario(3)
    cone = shannon_cone(sc)
    extra = LinearInequality.from_terms(sc.full_index, {frozenset(sc.labels): 1})
    padded = Cone(cone.index, list(cone) + [extra])
    once = remove_redundant(padded)
    assert extra.coeffs not in once.coefficient_set()
    assert remove_redundant(once).coefficient_set() == once.coefficient_set()
    assert len(once) == len(cone)   # elementals are irredundant


# -- extension feasibility ----------------------------------------------------------

@pytest.fixture(scope="module")
def triangle_cone():
    sc = n_cycle_scenario(3)
    return sc, project_cone(shannon_cone(sc), sc.observed_index)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=6, max_size=6))
def test_exact_extension_matches_projection(triangle_cone, vals):
    sc, cone = triangle_cone
    v = EntropyVector(sc.observed_index, tuple(Fraction(x, 2) for x in vals))
    ext = extension_feasible(v, sc)
    assert bool(ext) == bool(membership(v, cone))
    if ext:
        assert project(ext.witness, sc) == v
        assert membership(ext.witness, shannon_cone(sc))
    else:
        assert ext.certificate.value(v) < 0
        elems = [q.coeffs for q in shannon_cone(sc)]
        assert is_redundant(ext.certificate.lifted(sc.full_index).coeffs, elems)


def test_float_extension_of_true_entropies(rng):
    sc = chained_bell_scenario(2)
    for _ in range(20):
        d = random_distribution(rng, sc.labels, 2)
        obs = d.entropy_vector(sc.observed_index)
        ext = extension_feasible(obs, sc)
        assert ext and ext.residual <= 1e-9


def test_nd_cone_is_per_context():
    sc = n_cycle_scenario(4)
    cone = nd_cone(sc)
    assert len(cone) == 4 * 3
    assert all(len(q.terms()) <= 3 for q in cone)
