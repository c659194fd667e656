"""Evaluation metrics and the candidate taxonomy for synthetic studies.

PE deliberately uses the unsquared Frobenius norm divided by n*p; that
normalization of an unsquared norm is unusual but is the quantity the
experiments track, so it is kept exactly as defined.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import CandidateSet, support_dag

__all__ = [
    "MetricsRecord",
    "CandidateTaxonomy",
    "kl_loss",
    "prediction_error",
    "estimation_errors",
    "estimated_precision",
    "classify_candidates",
    "taxonomy_weight_sums",
    "kl_divergence_model",
]

SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class MetricsRecord:
    """The four losses tracked per fitted estimator."""

    kl: float
    pe: float
    ee_a: float
    ee_omega: float


@dataclass(frozen=True)
class CandidateTaxonomy:
    """Partition of candidate indices (1-based) by fidelity to the truth.

    ``underfitted`` are the first M0 candidates missing at least one
    true edge; ``smallest_correct`` is index M0+1 when any candidate
    contains the truth, else None; ``overfitted`` are the rest. Under
    nesting the correct candidates always form a suffix.
    """

    underfitted: tuple[int, ...]
    smallest_correct: int | None
    overfitted: tuple[int, ...]

    @property
    def m0(self) -> int:
        return len(self.underfitted)


def _check_precision(omega: np.ndarray, name: str) -> np.ndarray:
    omega = np.asarray(omega, dtype=np.float64)
    if omega.ndim != 2 or omega.shape[0] != omega.shape[1]:
        raise ValueError(f"{name} must be square, got {omega.shape}")
    scale = max(1.0, float(np.abs(omega).max()))
    if float(np.abs(omega - omega.T).max()) > SYMMETRY_TOL * scale:
        raise ValueError(f"{name} is not symmetric to {SYMMETRY_TOL}")
    return omega


def _chol_logdet(omega: np.ndarray, name: str) -> float:
    """Log-determinant via Cholesky; reports the offending eigenvalue on failure."""
    try:
        chol = np.linalg.cholesky(omega)
    except np.linalg.LinAlgError:
        smallest = float(np.linalg.eigvalsh(omega)[0])
        raise ValueError(
            f"{name} is not positive definite (smallest eigenvalue {smallest:.3e})"
        ) from None
    return 2.0 * float(np.sum(np.log(np.diagonal(chol))))


def kl_loss(omega_hat: np.ndarray, omega0: np.ndarray) -> float:
    """KL loss tr(O0^-1 Oh) - log|O0^-1 Oh| - p between precision matrices.

    Returns exactly 0.0 for bitwise-equal inputs, honoring the equality
    case of the Bregman property; otherwise the formula value is
    returned as computed (no clamping).
    """
    omega_hat = _check_precision(omega_hat, "omega_hat")
    omega0 = _check_precision(omega0, "omega0")
    if omega_hat.shape != omega0.shape:
        raise ValueError("precision matrices must share a shape")
    p = omega_hat.shape[0]
    logdet_hat = _chol_logdet(omega_hat, "omega_hat")
    logdet0 = _chol_logdet(omega0, "omega0")
    if np.array_equal(omega_hat, omega0):
        return 0.0
    trace = float(np.trace(np.linalg.solve(omega0, omega_hat)))
    return trace - (logdet_hat - logdet0) - p


def prediction_error(x: np.ndarray, a0: np.ndarray, a_hat: np.ndarray) -> float:
    """PE = ||X (A0 - A_hat)||_F / (n p), with the norm unsquared."""
    x = np.asarray(x, dtype=np.float64)
    n, p = x.shape
    diff = np.asarray(a0, dtype=np.float64) - np.asarray(a_hat, dtype=np.float64)
    return float(np.linalg.norm(x @ diff, "fro")) / (n * p)


def estimation_errors(
    a0: np.ndarray, a_hat: np.ndarray, omega0: np.ndarray, omega_hat: np.ndarray
) -> tuple[float, float]:
    """Frobenius estimation errors (||A0 - A_hat||_F, ||O0 - O_hat||_F)."""
    ee_a = float(np.linalg.norm(np.asarray(a0) - np.asarray(a_hat), "fro"))
    ee_omega = float(np.linalg.norm(np.asarray(omega0) - np.asarray(omega_hat), "fro"))
    return ee_a, ee_omega


def estimated_precision(a_hat: np.ndarray, sigma2_hat: float) -> np.ndarray:
    """Plug-in precision (I - A)(I - A)^T / sigma2.

    Positive definite whenever support(a_hat) is acyclic, because a
    simultaneous permutation then makes I - A triangular with unit
    diagonal (determinant one).
    """
    if sigma2_hat <= 0.0:
        raise ValueError(f"sigma2_hat must be positive, got {sigma2_hat}")
    a_hat = np.asarray(a_hat, dtype=np.float64)
    b = np.eye(a_hat.shape[0]) - a_hat
    omega = (b @ b.T) / sigma2_hat
    return (omega + omega.T) / 2.0


def classify_candidates(cs: CandidateSet, a0: np.ndarray) -> CandidateTaxonomy:
    """Split candidates into underfitted / smallest correct / overfitted.

    Candidate m is correctly specified iff support(a0) is a subset of
    E^(m); nesting makes the correct candidates a suffix, so M0 is the
    count of underfitted models and the smallest correct model sits at
    index M0 + 1 (1-based), if it exists.
    """
    truth = set(support_dag(a0).edges)
    correct = [set(mod.edges.edges) >= truth for mod in cs.models]
    m0 = 0
    while m0 < len(correct) and not correct[m0]:
        m0 += 1
    if any(correct[:m0]) or not all(correct[m0:]):
        raise ValueError("correct candidates do not form a suffix; nesting violated")
    indices = range(1, len(cs) + 1)
    if m0 == len(cs):
        return CandidateTaxonomy(tuple(indices), None, ())
    return CandidateTaxonomy(
        underfitted=tuple(indices[:m0]),
        smallest_correct=m0 + 1,
        overfitted=tuple(indices[m0 + 1 :]),
    )


def taxonomy_weight_sums(tax: CandidateTaxonomy, w: np.ndarray) -> tuple[float, float, float]:
    """Weight mass on (underfitted, smallest correct, overfitted) classes."""
    w = np.asarray(w, dtype=np.float64)
    under = float(sum(w[i - 1] for i in tax.underfitted))
    smallest = float(w[tax.smallest_correct - 1]) if tax.smallest_correct else 0.0
    over = float(sum(w[i - 1] for i in tax.overfitted))
    return under, smallest, over


def kl_divergence_model(a: np.ndarray, a0: np.ndarray, sigma: float, n: int) -> float:
    """Population KL divergence of a candidate matrix from the truth.

    Computes (n / 2 sigma^2) tr{(I - A)(I - A)^T Sigma0} - n p / 2 with
    Sigma0 the SEM covariance implied by (a0, sigma). A theory-side
    diagnostic for tests and experiments, not part of the user pipeline.
    Returns exactly 0.0 when ``a`` and ``a0`` are bitwise equal.
    """
    if sigma <= 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    a = np.asarray(a, dtype=np.float64)
    a0 = np.asarray(a0, dtype=np.float64)
    if np.array_equal(a, a0):
        return 0.0
    p = a0.shape[0]
    b = np.eye(p) - a
    b0 = np.eye(p) - a0
    # Sigma0 = sigma^2 (B0 B0')^{-1}, so the sigma^2 factors cancel.
    ratio = np.linalg.solve(b0 @ b0.T, b @ b.T)
    return 0.5 * n * float(np.trace(ratio)) - 0.5 * n * p
