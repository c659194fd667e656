"""Per-node least squares under a fixed edge set, and the noise-variance plug-in.

Each node j is regressed on its parent columns by a reduced QR
factorization (never the normal equations); rank is checked on the
diagonal of R. Entries of the coefficient matrix outside the requested
edge set are exact zeros by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import RankDeficientError, TooManyParentsError
from .graphs import Dag, as_data_matrix, validate_dag

__all__ = ["FitResult", "fit_edgeset", "estimate_sigma2", "profile_loglik", "ols_column", "rank_ratio"]

RANK_TOL = 1e-10


def rank_ratio(xp: np.ndarray) -> float:
    """Smallest over largest magnitude on the R diagonal of a QR of ``xp``."""
    d = np.abs(np.diagonal(np.linalg.qr(xp, mode="r")))
    dmax = float(d.max())
    return float(d.min()) / dmax if dmax else 0.0


@dataclass(frozen=True)
class FitResult:
    """Least-squares fit of a coefficient matrix on a fixed edge set.

    ``residuals`` (n x p) is cached so downstream Gram computations do
    not refit; ``rss`` is its squared Frobenius norm accumulated per
    column.
    """

    a_hat: np.ndarray
    rss: float
    per_node_rank_ok: tuple[bool, ...]
    residuals: np.ndarray
    col_rss: np.ndarray

    @property
    def p(self) -> int:
        return self.a_hat.shape[0]


def ols_column(xp: np.ndarray, y: np.ndarray):
    """Regress ``y`` on columns ``xp`` via reduced QR.

    Returns ``(beta, resid)`` or None when the diagonal of R signals
    numerical rank deficiency (smallest magnitude < 1e-10 x largest).
    """
    q, r = np.linalg.qr(xp)
    d = np.abs(np.diagonal(r))
    dmax = d.max()
    if dmax == 0.0 or d.min() < RANK_TOL * dmax:
        return None
    beta = solve_triangular(r, q.T @ y, lower=False)
    resid = y - xp @ beta
    return beta, resid


def fit_edgeset(x: np.ndarray, e: Dag) -> FitResult:
    """Fit the SEM coefficient matrix by per-node least squares.

    Column j of the result solves the regression of x_j on the parent
    columns of j in ``e``; nodes without parents get a zero column and
    keep their raw data as residual.
    """
    x = as_data_matrix(x)
    n, p = x.shape
    if e.p != p:
        raise ValueError(f"edge set is over {e.p} nodes but data has {p} columns")
    if not validate_dag(e):
        raise ValueError("edge set contains a directed cycle")

    a_hat = np.zeros((p, p))
    residuals = np.empty_like(x)
    col_rss = np.empty(p)
    rank_ok = []
    for j, pa in enumerate(e.parent_lists()):
        if not pa:
            residuals[:, j] = x[:, j]
        else:
            if len(pa) >= n:
                raise TooManyParentsError(j, len(pa), n)
            fitted = ols_column(x[:, pa], x[:, j])
            if fitted is None:
                raise RankDeficientError(j, rank_ratio(x[:, pa]))
            beta, resid = fitted
            a_hat[pa, j] = beta
            residuals[:, j] = resid
        col_rss[j] = residuals[:, j] @ residuals[:, j]
        rank_ok.append(True)

    a_hat.flags.writeable = False
    residuals.flags.writeable = False
    col_rss.flags.writeable = False
    return FitResult(
        a_hat=a_hat,
        rss=float(col_rss.sum()),
        per_node_rank_ok=tuple(rank_ok),
        residuals=residuals,
        col_rss=col_rss,
    )


def estimate_sigma2(x: np.ndarray, largest: FitResult, k_max: int) -> float:
    """Plug-in noise variance rss / ((n - k_max) * p) from the largest candidate."""
    x = as_data_matrix(x)
    n, p = x.shape
    if n <= k_max:
        raise ValueError(f"need n > k_max for the variance plug-in, got n={n}, k_max={k_max}")
    return float(largest.rss / ((n - k_max) * p))


def profile_loglik(x: np.ndarray, a: np.ndarray, sigma2: float) -> float:
    """Gaussian log-likelihood profiled at a fixed coefficient matrix.

    Computed literally as
    -(n p / 2) log(2 pi sigma2) - (n / (2 sigma2)) tr{(I - A)(I - A)^T S_n}
    with S_n = X^T X / n, so the trace identity n tr{...} = ||X - XA||_F^2
    can be checked against it independently.
    """
    x = as_data_matrix(x)
    if sigma2 <= 0.0:
        raise ValueError(f"sigma2 must be positive, got {sigma2}")
    n, p = x.shape
    s_n = (x.T @ x) / n
    b = np.eye(p) - np.asarray(a, dtype=np.float64)
    trace = float(np.sum(b * (s_n @ b)))
    return -0.5 * n * p * np.log(2.0 * np.pi * sigma2) - 0.5 * n * trace / sigma2
