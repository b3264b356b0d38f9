"""Smoke tests for the python module: end-to-end solve, decomposition,
assumption checks, and simulator determinism on small instances."""

import math

import occulp


def test_example4_case_ii_value_and_policy():
    ex = occulp.example4(occulp.Example4Variant.II, 20, 0.8)
    assert occulp.validate_model(ex.model) == []
    report = occulp.solve_cp(ex.model)
    assert report.status == "optimal"
    assert abs(report.performance[0] - 1.0) < 1e-9
    mass = report.policy.probs[ex.state_start][2] + report.policy.probs[ex.state_start][3]
    assert mass > 1.0 - 1e-9


def test_oracle_agrees_with_lp():
    model = occulp.random_cmdp(7, 3, 2, 1, (0.0, 1.0))
    report = occulp.solve_cp(model)
    oracle = occulp.brute_force_cp(model)
    assert report.status == oracle.status == "optimal"
    assert abs(report.performance[0] - oracle.value) < 1e-8


def test_chattering_roundtrip():
    model = occulp.random_cmdp(11, 4, 3, 1, (0.0, 1.0))
    report = occulp.solve_cp(model)
    assert report.status == "optimal"
    result = occulp.chattering_decompose(model, report)
    assert result.policy.size() <= 2
    assert result.report.ok
    for row in result.policy.weights:
        assert abs(sum(row) - 1.0) < 1e-12


def test_neg_inf_surfaces_as_python_float():
    ex1 = occulp.example1(1.0, occulp.DiscretizationSpec(), 0.85, -30.0)
    assert ex1.model.reward(0, 5, 0) == -math.inf


def test_assumption_checks():
    ex1 = occulp.example1(4.0, occulp.DiscretizationSpec(), 0.85, -30.0)
    assert occulp.check_bound(ex1.model, ex1.weight, False).holds
    delta = occulp.compute_delta(ex1.model, ex1.weight)
    tail = occulp.check_tail_a12(ex1.model, ex1.weight, 50)
    assert tail.conclusive
    assert tail.beta_delta == 0.85 * delta
    assert tail.bounds[10] < tail.bounds[0]


def test_simulation_determinism():
    model = occulp.random_cmdp(3, 3, 2, 0, (0.0, 1.0))
    policy = occulp.random_policy(model, 3)
    options = occulp.SimulationOptions()
    options.seed = 42
    options.episodes = 2000
    options.epsilon = 1e-4
    first = occulp.simulate(model, policy, options)
    second = occulp.simulate(model, policy, options)
    assert first.estimates == second.estimates
    exact = occulp.evaluate_stationary(model, policy)
    assert abs(first.estimates[0] - exact[0]) < 3 * first.std_errors[0] + options.epsilon


def test_model_json_roundtrip():
    model = occulp.random_cmdp(19, 3, 2, 1, (0.0, 1.0))
    text = model.to_json()
    parsed = occulp.FiniteCMDP.from_json(text)
    assert parsed.to_json() == text
    assert parsed.hash() == model.hash()
