"""Scikit-learn style estimator wrapping the full averaging pipeline."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .graphs import Dag, as_data_matrix
from .leastsquares import estimate_sigma2, profile_loglik
from .metrics import estimated_precision
from .search import SearchConfig, build_candidates
from .weights import AveragingConfig, average_estimator, gram_matrix, lambda_value, solve_weights

__all__ = ["DagModelAverager"]


class DagModelAverager(BaseEstimator):
    """Model-averaged estimation of a linear Gaussian DAG.

    Fitting builds ``n_candidates`` nested candidate edge sets by greedy
    search on a random half split, refits each candidate on the full
    sample, and combines them with simplex weights minimizing the
    penalized residual criterion w'Gw + lambda w'k.

    Parameters
    ----------
    n_candidates : int, default=11
        Number of nested candidates (odd; the initial graph sits in the
        middle).
    lambda_rule : str or float, default="log_n"
        Penalty rule: "log_n", "mallows2" (penalty vector scaled by the
        variance plug-in, lambda = 2), or a fixed nonnegative number.
    initializer : str, default="greedy_bic"
        "greedy_bic" hill climbing or "user_supplied" (see
        ``initial_edges``).
    initial_edges : Dag or None, default=None
        Initial graph when ``initializer="user_supplied"``.
    max_parents : int or None, default=None
        Optional cap on parents per node during the search.
    qp_tolerance : float, default=1e-10
        Duality-gap and KKT tolerance of the weight solver.
    qp_max_iters : int, default=100000
        Iteration cap of the weight solver.
    random_state : int, default=0
        Seed of the train/validation split, the pipeline's only
        randomness.

    Attributes
    ----------
    coef_ : ndarray of shape (p, p)
        Averaged coefficient matrix; entry (k, j) is the weight of edge
        k -> j and the support is acyclic.
    weights_ : ndarray of shape (n_candidates,)
        Simplex weights over the candidates.
    candidates_ : CandidateSet
        The nested candidates with their full-sample fits.
    sigma2_ : float
        Noise-variance plug-in from the largest candidate.
    precision_ : ndarray of shape (p, p)
        Plug-in precision matrix (I - coef_)(I - coef_)' / sigma2_.
    lambda_ : float
        Resolved penalty multiplier.
    gram_ : ndarray of shape (n_candidates, n_candidates)
        Residual Gram matrix used by the weight criterion.
    weight_solution_ : WeightSolution
        Full solver output including the KKT residual.
    """

    def __init__(
        self,
        n_candidates: int = 11,
        lambda_rule: str | float = "log_n",
        initializer: str = "greedy_bic",
        initial_edges: Dag | None = None,
        max_parents: int | None = None,
        qp_tolerance: float = 1e-10,
        qp_max_iters: int = 100_000,
        random_state: int = 0,
    ):
        self.n_candidates = n_candidates
        self.lambda_rule = lambda_rule
        self.initializer = initializer
        self.initial_edges = initial_edges
        self.max_parents = max_parents
        self.qp_tolerance = qp_tolerance
        self.qp_max_iters = qp_max_iters
        self.random_state = random_state

    def fit(self, X, y=None):
        """Fit the averaged DAG estimator on an (n, p) data matrix."""
        X = check_array(X, dtype=np.float64, ensure_min_samples=4)
        x = as_data_matrix(X)
        n, p = x.shape
        cfg = SearchConfig(
            m_candidates=self.n_candidates,
            split_seed=int(self.random_state),
            initializer=self.initializer,
            initial_dag=self.initial_edges,
            max_parents=self.max_parents,
        )
        lam = lambda_value(self.lambda_rule, n)
        qp_cfg = AveragingConfig(
            lambda_rule=self.lambda_rule,
            qp_tolerance=self.qp_tolerance,
            qp_max_iters=self.qp_max_iters,
        )
        cs = build_candidates(x, cfg)
        largest = cs.models[-1]
        sigma2 = estimate_sigma2(x, largest.fit, largest.k)
        gram = gram_matrix(x, cs)
        penalty = cs.k_vector
        if self.lambda_rule == "mallows2":
            penalty = sigma2 * penalty
        solution = solve_weights(gram, penalty, lam, qp_cfg)

        self.candidates_ = cs
        self.weights_ = solution.w
        self.coef_ = average_estimator(cs, solution.w)
        self.sigma2_ = sigma2
        self.precision_ = estimated_precision(self.coef_, sigma2)
        self.lambda_ = lam
        self.gram_ = solution.gram
        self.weight_solution_ = solution
        self.n_features_in_ = p
        return self

    def predict(self, X) -> np.ndarray:
        """Predict each column from the others: X @ coef_."""
        check_is_fitted(self)
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, expected {self.n_features_in_}"
            )
        return X @ self.coef_

    def score(self, X, y=None) -> float:
        """Mean per-sample Gaussian log-likelihood at the fitted matrix."""
        check_is_fitted(self)
        x = as_data_matrix(check_array(X, dtype=np.float64))
        return profile_loglik(x, self.coef_, self.sigma2_) / x.shape[0]
