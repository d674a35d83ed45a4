import json
import math

import numpy as np
import pytest
from scipy.stats import entropy as scipy_entropy

from entropic_nd.inequalities import entropic_chained_bell, entropic_cycle
from entropic_nd.quantum import (InvalidGammas, Layout, NonCommuting, QuantumExperiment,
                                 entropy_vector_value, expression_value, joint_probability,
                                 no_disturbance_gap, observed_entropy_vector, optimize_violation,
                                 pentagram_experiment, probabilistic_cycle_value)
from entropic_nd.scenario import chained_bell_scenario, n_cycle_scenario, new_scenario

Z0 = np.diag([1.0, 0.0])
Z1 = np.diag([0.0, 1.0])
X0 = np.array([[0.5, 0.5], [0.5, 0.5]])
X1 = np.eye(2) - X0


def test_single_qubit_table():
    exp = QuantumExperiment(2, Z0, {"A": (Z0, Z1), "B": (X0, X1)})
    assert np.allclose(joint_probability(exp, ["A"]).probs, [1, 0])
    assert np.allclose(joint_probability(exp, ["B"]).probs, [0.5, 0.5])
    with pytest.raises(NonCommuting):
        joint_probability(exp, ["A", "B"])


def test_singlet_is_anticorrelated():
    psi = np.array([0, 1, -1, 0]) / math.sqrt(2)
    rho = np.outer(psi, psi)
    za = [np.kron(p, np.eye(2)) for p in (Z0, Z1)]
    zb = [np.kron(np.eye(2), p) for p in (Z0, Z1)]
    exp = QuantumExperiment(4, rho, {"A": za, "B": zb})
    t = joint_probability(exp, ["A", "B"])
    assert np.allclose(t.probs, [[0, 0.5], [0.5, 0]])
    assert abs(t.entropy() - 1) < 1e-12
    assert abs(t.entropy(["A"]) - 1) < 1e-12


def test_invalid_inputs():
    with pytest.raises(ValueError):
        QuantumExperiment(2, np.eye(2), {"A": (Z0, Z1)})          # trace 2
    with pytest.raises(ValueError):
        QuantumExperiment(2, Z0, {"A": (Z0, X0)})                 # not a decomposition
    sc = new_scenario(["A", "B"], [("A", "B")])
    with pytest.raises(NonCommuting):
        QuantumExperiment(2, Z0, {"A": (Z0, Z1), "B": (X0, X1)}, sc)


def _pentagram_by_amplitudes(n=5):
    """Sum of projector weights |<v_i|psi>|^2 for the symmetric pentagram."""
    c = math.cos(math.pi / n)
    theta = math.acos(math.sqrt(c / (1 + c)))
    return n * math.cos(theta) ** 2


def test_pentagram_matches_closed_form():
    exp = pentagram_experiment()
    cyc = list(exp.scenario.labels)
    # rank-1 neighbours are orthogonal, so each correlator is 1 - 2p_i - 2p_{i+1}
    total_p = _pentagram_by_amplitudes()
    expected = -(5 - 4 * total_p)
    got = probabilistic_cycle_value(exp, cyc, [-1] * 5)
    assert abs(got - expected) < 1e-9
    assert abs(got - (4 * math.sqrt(5) - 5)) < 1e-9
    assert got > 3      # beyond the noncontextual bound n - 2


def test_gamma_validation():
    exp = pentagram_experiment()
    cyc = list(exp.scenario.labels)
    with pytest.raises(InvalidGammas):
        probabilistic_cycle_value(exp, cyc, [1] * 5)
    with pytest.raises(InvalidGammas):
        probabilistic_cycle_value(exp, cyc, [-1] * 4)


def test_three_evaluations_agree():
    exp = pentagram_experiment()
    e = entropic_cycle(5)
    a = expression_value(exp, e)
    b = entropy_vector_value(exp, exp.scenario, e)
    assert abs(a - b) < 1e-12


def test_entropies_match_scipy():
    exp = pentagram_experiment()
    sc = exp.scenario
    h = observed_entropy_vector(exp, sc)
    for s in sc.observed_index:
        p = joint_probability(exp, sorted(s)).probs.ravel()
        assert abs(h[s] - scipy_entropy(p, base=2)) < 1e-12


def test_no_disturbance_gap_is_zero_for_quantum_models():
    exp = pentagram_experiment()
    assert no_disturbance_gap(exp, exp.scenario) < 1e-12


def test_full_noise_cannot_violate():
    exp = pentagram_experiment().with_noise(1.0)
    assert expression_value(exp, entropic_cycle(5)) <= 0
    assert np.allclose(exp.state, np.eye(3) / 3)


def test_json_roundtrip():
    exp = pentagram_experiment()
    back = QuantumExperiment.from_json(exp.to_json(), exp.scenario)
    assert np.allclose(back.state, exp.state)
    for lab in exp.labels:
        assert all(np.allclose(p, q) for p, q in zip(back.projectors(lab), exp.projectors(lab)))
    data = json.loads(exp.to_json())
    assert set(data) == {"dim", "state", "measurements"}


def test_layout_fast_value_agrees_with_matrices(rng):
    sc = chained_bell_scenario(2)
    lay = Layout.build(sc, dims=2)
    e = entropic_chained_bell(2)
    for _ in range(5):
        x = lay.random_params(rng)
        exp = lay.experiment(x)
        assert abs(lay.fast_value(x, e) - expression_value(exp, e)) < 1e-9
        assert no_disturbance_gap(exp, sc) < 1e-9


def test_layout_rejects_cross_party_incompatibility():
    sc = new_scenario(["A0", "B0", "B1"], [("A0", "B0")])
    with pytest.raises(ValueError):
        Layout.build(sc, dims=2)


def test_optimizer_is_reproducible():
    sc = chained_bell_scenario(2)
    lay = Layout.build(sc, dims=2)
    e = entropic_chained_bell(2)
    r1 = optimize_violation(lay, e, [3], maxiter=300, restarts=0)
    r2 = optimize_violation(lay, e, [3], maxiter=300, restarts=0)
    assert r1.value == r2.value and np.array_equal(r1.params, r2.params)


def test_kcbs_qubit_has_no_violation():
    sc = n_cycle_scenario(5)
    lay = Layout.build(sc, {x: "A" for x in sc.labels}, dims=2)
    res = optimize_violation(lay, entropic_cycle(5), [0, 1], maxiter=1500, restarts=0)
    assert res.value <= 1e-6
