import numpy as np
import pytest

from dagavg.graphs import support_dag, validate_dag
from dagavg.sampling import SynthConfig, derive_seeds, generate_true_dag, sample_data, true_precision


def test_generate_true_dag_strictly_lower_triangular():
    a = generate_true_dag(SynthConfig(p=10, rho=0.2, seed=3))
    assert np.array_equal(a, np.tril(a, k=-1))
    nz = a[a != 0.0]
    assert nz.size > 0 and np.all(nz == 0.5)


def test_generate_true_dag_rho_zero_and_one():
    assert np.array_equal(generate_true_dag(SynthConfig(p=10, rho=0.0, seed=1)), np.zeros((10, 10)))
    full = generate_true_dag(SynthConfig(p=10, rho=1.0, seed=1))
    assert np.count_nonzero(full) == 45
    assert np.all(full[np.tril_indices(10, k=-1)] == 0.5)


def test_generate_true_dag_always_acyclic():
    for seed in range(25):
        a = generate_true_dag(SynthConfig(p=8, rho=0.5, seed=seed))
        assert validate_dag(support_dag(a))


def test_synth_config_validation():
    with pytest.raises(ValueError):
        SynthConfig(p=0, rho=0.2)
    with pytest.raises(ValueError):
        SynthConfig(p=3, rho=1.5)
    with pytest.raises(ValueError):
        SynthConfig(p=3, rho=0.2, sigma=0.0)


def test_sample_data_no_edges_is_pure_noise():
    x = sample_data(np.zeros((4, 4)), 1.0, 50_000, seed=5)
    s = (x.T @ x) / x.shape[0]
    np.testing.assert_allclose(s, np.eye(4), atol=0.05)


def test_sample_data_two_node_covariance_oracle():
    # population covariance of (x0, x1 = 0.5 x0 + z1) derived by hand:
    # var x0 = 1, cov = 0.5, var x1 = 0.25 + 1 = 1.25
    expected = np.array([[1.0, 0.5], [0.5, 1.25]])
    a0 = np.zeros((2, 2))
    a0[0, 1] = 0.5
    x = sample_data(a0, 1.0, 1_000_000, seed=11)
    n = x.shape[0]
    s = (x.T @ x) / n
    np.testing.assert_allclose(s, expected, atol=0.01)


def test_sample_data_whitening_identity():
    # (I - A0)' Sigma_X (I - A0) = sigma^2 I on the sample covariance
    a0 = generate_true_dag(SynthConfig(p=6, rho=0.5, seed=9))
    x = sample_data(a0, 1.0, 200_000, seed=10)
    s = (x.T @ x) / x.shape[0]
    b = np.eye(6) - a0
    np.testing.assert_allclose(b.T @ s @ b, np.eye(6), atol=0.03)


def test_sample_data_bit_reproducible():
    a0 = generate_true_dag(SynthConfig(p=5, rho=0.4, seed=2))
    x1 = sample_data(a0, 1.0, 100, seed=7)
    x2 = sample_data(a0, 1.0, 100, seed=7)
    assert np.array_equal(x1, x2)
    a1 = generate_true_dag(SynthConfig(p=5, rho=0.4, seed=2))
    assert np.array_equal(a0, a1)


def test_sample_data_independent_columns_weakly_correlated():
    n = 10_000
    x = sample_data(np.zeros((6, 6)), 1.0, n, seed=13)
    c = np.corrcoef(x, rowvar=False)
    off = np.abs(c[np.triu_indices(6, k=1)])
    assert np.mean(off <= 4.0 / np.sqrt(n)) >= 0.95


def test_sample_data_validation():
    a0 = np.zeros((3, 3))
    with pytest.raises(ValueError):
        sample_data(a0, 0.0, 10, seed=0)
    with pytest.raises(ValueError):
        sample_data(a0, 1.0, 0, seed=0)
    cyc = np.zeros((2, 2))
    cyc[0, 1] = cyc[1, 0] = 0.5
    with pytest.raises(ValueError):
        sample_data(cyc, 1.0, 10, seed=0)


def test_true_precision_identity_cases():
    np.testing.assert_array_equal(true_precision(np.zeros((3, 3)), 1.0), np.eye(3))
    np.testing.assert_allclose(true_precision(np.zeros((3, 3)), 2.0), 0.25 * np.eye(3))


def test_true_precision_two_node_oracle():
    # B = I - A0 = [[1, -0.5], [0, 1]]; Omega = B B' = [[1.25, -0.5], [-0.5, 1]]
    a0 = np.zeros((2, 2))
    a0[0, 1] = 0.5
    np.testing.assert_allclose(
        true_precision(a0, 1.0), np.array([[1.25, -0.5], [-0.5, 1.0]]), atol=1e-15
    )


def test_true_precision_inverts_sigma0():
    a0 = generate_true_dag(SynthConfig(p=7, rho=0.5, seed=21))
    sigma = 1.3
    b_inv = np.linalg.inv(np.eye(7) - a0)
    sigma0 = sigma**2 * b_inv.T @ b_inv
    np.testing.assert_allclose(true_precision(a0, sigma) @ sigma0, np.eye(7), atol=1e-10)


def test_derive_seeds_deterministic_and_distinct():
    a = derive_seeds(0, (10, 200000, 50, 3), 3)
    b = derive_seeds(0, (10, 200000, 50, 3), 3)
    assert a == b and len(a) == 3
    c = derive_seeds(0, (10, 200000, 50, 4), 3)
    assert a != c
    assert all(isinstance(v, int) and v >= 0 for v in a)
