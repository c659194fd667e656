"""Tests for the simplex weight criterion, its solver, and averaging."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dagavg import (
    AveragingConfig,
    NotConvergedError,
    average_estimator,
    gram_matrix,
    lambda_value,
    solve_weights,
    support_dag,
    validate_dag,
)
from conftest import nested_candidate_set


def simplex_grid(m, step):
    """All grid points with coordinates in step * {0, 1, ...} summing to 1."""
    ticks = int(round(1.0 / step))
    if m == 2:
        w0 = np.linspace(0.0, 1.0, ticks + 1)
        return np.column_stack([w0, 1.0 - w0])
    pts = []
    for i in range(ticks + 1):
        for j in range(ticks + 1 - i):
            pts.append((i * step, j * step, 1.0 - (i + j) * step))
    return np.array(pts)


def brute_force_weights(g, k, lam, step=1e-3):
    grid = simplex_grid(g.shape[0], step)
    vals = np.einsum("ij,jk,ik->i", grid, g, grid) + lam * (grid @ k)
    return grid[int(np.argmin(vals))]


def test_two_candidate_oracle():
    g = np.diag([1.0, 2.0])
    k = np.array([1.0, 2.0])
    grid_w = brute_force_weights(g, k, 0.0, step=1e-4)
    np.testing.assert_allclose(grid_w, [2.0 / 3.0, 1.0 / 3.0], atol=2e-4)
    sol = solve_weights(g, k, 0.0)
    np.testing.assert_allclose(sol.w, [2.0 / 3.0, 1.0 / 3.0], atol=1e-8)
    np.testing.assert_allclose(sol.objective, 2.0 / 3.0, rtol=1e-10)


def test_pure_penalty_picks_smallest_model():
    sol = solve_weights(np.zeros((3, 3)), np.array([1.0, 2.0, 3.0]), 1.0)
    np.testing.assert_array_equal(sol.w, [1.0, 0.0, 0.0])
    assert sol.objective == 1.0


def test_single_candidate():
    sol = solve_weights(np.array([[5.0]]), np.array([3.0]), 2.0)
    np.testing.assert_array_equal(sol.w, [1.0])
    assert sol.objective == 11.0
    assert sol.kkt_residual == 0.0


def test_random_instances_match_grid(rng):
    for _ in range(25):
        b = rng.standard_normal((4, 3))
        g = b.T @ b + 0.1 * np.eye(3)
        k = np.array([1.0, 2.0, 3.0])
        lam = float(rng.uniform(0.0, 2.0))
        sol = solve_weights(g, k, lam)
        w_grid = brute_force_weights(g, k, lam, step=1e-3)
        obj_grid = float(w_grid @ g @ w_grid + lam * (k @ w_grid))
        np.testing.assert_allclose(sol.w, w_grid, atol=2e-3)
        assert sol.objective <= obj_grid + 1e-9
        assert sol.kkt_residual <= 1e-10


def test_vertex_optimality(rng):
    for _ in range(40):
        m = int(rng.integers(1, 7))
        b = rng.standard_normal((m + 2, m))
        g = b.T @ b
        k = rng.integers(0, 30, size=m).astype(float)
        lam = float(rng.uniform(0.0, 10.0))
        sol = solve_weights(g, k, lam)
        vertex_costs = np.diagonal(sol.gram) + sol.penalty
        assert sol.objective <= vertex_costs.min() + 1e-8


def test_first_order_optimality_by_finite_differences(rng):
    def crit(g, k, lam, w):
        return float(w @ g @ w + lam * (k @ w))

    for _ in range(10):
        b = rng.standard_normal((6, 4))
        g = b.T @ b + 0.05 * np.eye(4)
        k = np.arange(1.0, 5.0)
        lam = 1.3
        sol = solve_weights(g, k, lam)
        base = crit(g, k, lam, sol.w)
        for i in range(4):
            d = -sol.w.copy()
            d[i] += 1.0
            moved = crit(g, k, lam, sol.w + 1e-4 * d)
            assert moved >= base - 1e-7 * max(1.0, abs(base))


def test_permutation_equivariance(rng):
    b = rng.standard_normal((8, 5))
    g = b.T @ b + 0.2 * np.eye(5)
    k = np.array([1.0, 3.0, 2.0, 5.0, 4.0])
    sol = solve_weights(g, k, 0.7)
    perm = np.array([3, 0, 4, 1, 2])
    sol_p = solve_weights(g[np.ix_(perm, perm)], k[perm], 0.7)
    np.testing.assert_allclose(sol_p.w, sol.w[perm], atol=1e-9)


def test_scaling_leaves_argmin_unchanged(rng):
    b = rng.standard_normal((6, 3))
    g = b.T @ b + 0.1 * np.eye(3)
    k = np.array([0.0, 4.0, 9.0])
    sol = solve_weights(g, k, 0.5)
    sol_big = solve_weights(1e8 * g, 1e8 * k, 0.5)
    np.testing.assert_allclose(sol_big.w, sol.w, atol=1e-8)
    np.testing.assert_allclose(sol_big.objective, 1e8 * sol.objective, rtol=1e-8)


def test_average_complexity_decreases_with_lambda(rng):
    b = rng.standard_normal((10, 5))
    g = b.T @ b
    k = np.arange(5.0)
    complexities = [
        float(solve_weights(g, k, lam).w @ k) for lam in (0.0, 0.5, 1.0, 2.0, 5.0, 50.0)
    ]
    assert all(a >= b_ - 1e-9 for a, b_ in zip(complexities, complexities[1:]))


def test_indefinite_gram_is_floored():
    g = np.array([[1.0, 2.0], [2.0, 1.0]])
    sol = solve_weights(g, np.zeros(2), 0.0)
    assert np.linalg.eigvalsh(sol.gram).min() >= -1e-12
    np.testing.assert_allclose(
        sol.objective, float(sol.w @ sol.gram @ sol.w), rtol=1e-12
    )


def test_not_converged_reports_iterations():
    with pytest.raises(NotConvergedError):
        solve_weights(
            np.diag([1.0, 2.0, 3.0]),
            np.zeros(3),
            0.0,
            AveragingConfig(qp_max_iters=1),
        )


def test_solver_input_validation():
    g = np.eye(2)
    with pytest.raises(ValueError):
        solve_weights(np.ones((2, 3)), np.ones(2), 0.0)
    with pytest.raises(ValueError):
        solve_weights(np.array([[np.nan, 0.0], [0.0, 1.0]]), np.ones(2), 0.0)
    with pytest.raises(ValueError):
        solve_weights(g, np.ones(3), 0.0)
    with pytest.raises(ValueError):
        solve_weights(g, np.array([1.0, -1.0]), 0.0)
    with pytest.raises(ValueError):
        solve_weights(g, np.ones(2), -0.5)


def test_averaging_config_validation():
    with pytest.raises(ValueError):
        AveragingConfig(qp_tolerance=0.0)
    with pytest.raises(ValueError):
        AveragingConfig(qp_max_iters=0)
    with pytest.raises(ValueError):
        AveragingConfig(lambda_rule="bic")
    with pytest.raises(ValueError):
        AveragingConfig(lambda_rule=-1.0)


def test_lambda_value_rules():
    assert lambda_value("log_n", 800) == math.log(800)
    assert lambda_value("mallows2", 17) == 2.0
    assert lambda_value(0.0, 100) == 0.0
    assert lambda_value(1.5, 2) == 1.5
    assert lambda_value("1.5", 2) == 1.5
    with pytest.raises(ValueError):
        lambda_value("aic", 100)
    with pytest.raises(ValueError):
        lambda_value(-0.1, 100)
    with pytest.raises(ValueError):
        lambda_value("log_n", 1)


def test_gram_single_candidate_is_rss(rng):
    x = rng.standard_normal((30, 3))
    cs = nested_candidate_set(x, [((0, 1),)])
    g = gram_matrix(x, cs)
    np.testing.assert_allclose(g, [[cs.models[0].fit.rss]], rtol=1e-12)


def test_gram_identical_candidates_constant(rng):
    x = rng.standard_normal((25, 3))
    cs = nested_candidate_set(x, [((0, 2),), ((0, 2),)])
    g = gram_matrix(x, cs)
    np.testing.assert_allclose(g, g[0, 0] * np.ones((2, 2)), rtol=1e-12)


def test_gram_quadratic_form_is_average_residual_norm(rng):
    x = rng.standard_normal((40, 4))
    cs = nested_candidate_set(x, [(), ((0, 1),), ((0, 1), (2, 3)), ((0, 1), (2, 3), (0, 2))])
    g = gram_matrix(x, cs)
    for _ in range(20):
        w = rng.dirichlet(np.ones(4))
        a_w = average_estimator(cs, w)
        resid = x - x @ a_w
        np.testing.assert_allclose(
            float(w @ g @ w), float(np.sum(resid * resid)), rtol=1e-8
        )


def test_gram_dimension_mismatch(rng):
    x = rng.standard_normal((20, 3))
    cs = nested_candidate_set(x, [()])
    with pytest.raises(ValueError):
        gram_matrix(rng.standard_normal((20, 4)), cs)


def test_average_estimator_vertices_and_mean(rng):
    x = rng.standard_normal((30, 3))
    cs = nested_candidate_set(x, [(), ((0, 1),), ((0, 1), (1, 2))])
    for m in range(3):
        w = np.zeros(3)
        w[m] = 1.0
        np.testing.assert_allclose(average_estimator(cs, w), cs.models[m].coef, atol=0)
    mean = average_estimator(cs, np.full(3, 1.0 / 3.0))
    np.testing.assert_allclose(mean, np.mean(np.stack(cs.coefs), axis=0), rtol=1e-12)


def test_average_estimator_support_is_acyclic(rng):
    x = rng.standard_normal((50, 5))
    cs = nested_candidate_set(
        x, [((0, 1),), ((0, 1), (1, 2)), ((0, 1), (1, 2), (3, 4)), ((0, 1), (1, 2), (3, 4), (0, 4))]
    )
    for _ in range(100):
        w = rng.dirichlet(np.ones(4))
        assert validate_dag(support_dag(average_estimator(cs, w)))


def test_average_estimator_rejects_bad_weights(rng):
    x = rng.standard_normal((20, 3))
    cs = nested_candidate_set(x, [(), ((0, 1),)])
    with pytest.raises(ValueError):
        average_estimator(cs, np.array([0.5, 0.25]))
    with pytest.raises(ValueError):
        average_estimator(cs, np.array([1.5, -0.5]))
    with pytest.raises(ValueError):
        average_estimator(cs, np.ones(3) / 3.0)


@settings(deadline=None, max_examples=60)
@given(
    data=st.data(),
    m=st.integers(min_value=1, max_value=5),
    lam=st.floats(min_value=0.0, max_value=10.0),
)
def test_solver_property_simplex_and_vertex_bound(data, m, lam):
    finite = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)
    b_rows = data.draw(
        st.lists(st.lists(finite, min_size=m, max_size=m), min_size=m, max_size=m)
    )
    b = np.array(b_rows)
    g = b.T @ b
    k = np.array(data.draw(st.lists(st.integers(0, 20), min_size=m, max_size=m)), dtype=float)
    sol = solve_weights(g, k, lam)
    assert sol.w.shape == (m,)
    assert np.all(sol.w >= 0.0)
    assert abs(float(sol.w.sum()) - 1.0) <= 1e-12
    assert sol.objective <= float(np.min(np.diagonal(sol.gram) + sol.penalty)) + 1e-8
