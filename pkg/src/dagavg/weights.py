"""Penalized least-squares weight criterion and its simplex QP solver.

The criterion C(w) = w'Gw + lambda * w'k is minimized over the
probability simplex by a fully corrective Frank-Wolfe method: each outer
iteration adds the vertex minimizing the linearized objective, then an
active-set inner loop solves the equality-constrained problem on the
current face exactly, dropping coordinates that a ratio test pins at
zero. Convergence is declared when the Frank-Wolfe duality gap falls
below ``qp_tolerance`` and a KKT residual, computed independently of the
solver state, certifies the same tolerance. No external QP solver is
used; G is tiny (M x M) and determinism matters more than speed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotConvergedError
from .graphs import CandidateSet, as_data_matrix, check_weight_vector

__all__ = [
    "AveragingConfig",
    "WeightSolution",
    "gram_matrix",
    "solve_weights",
    "lambda_value",
    "average_estimator",
]


@dataclass(frozen=True)
class AveragingConfig:
    """Weight-optimization settings.

    ``lambda_rule`` is one of "log_n", "mallows2" or a nonnegative
    number (fixed value). ``qp_tolerance`` bounds both the duality gap
    and the certified KKT residual.
    """

    lambda_rule: str | float = "log_n"
    qp_tolerance: float = 1e-10
    qp_max_iters: int = 100_000

    def __post_init__(self):
        if self.qp_tolerance <= 0.0:
            raise ValueError("qp_tolerance must be positive")
        if self.qp_max_iters < 1:
            raise ValueError("qp_max_iters must be >= 1")
        lambda_value(self.lambda_rule, 2)


@dataclass(frozen=True)
class WeightSolution:
    """Solver output: weights, objective, certificate, problem data.

    ``gram`` is the symmetrized, eigenvalue-floored G actually solved;
    ``penalty`` is the linear term lambda * k in original units, so the
    objective at unit vertex m is ``gram[m, m] + penalty[m]``.
    """

    w: np.ndarray
    objective: float
    kkt_residual: float
    gram: np.ndarray
    penalty: np.ndarray


def lambda_value(rule: str | float, n: int) -> float:
    """Resolve a penalty rule to a number.

    "log_n" gives ln(n); "mallows2" gives 2 (the Mallows special case,
    which matches the 2 sigma^2 w'k penalty only when the caller
    pre-scales k by the variance plug-in); any number is taken as a
    fixed value.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if isinstance(rule, str):
        if rule == "log_n":
            return float(np.log(n))
        if rule == "mallows2":
            return 2.0
        try:
            rule = float(rule)
        except ValueError:
            raise ValueError(f"unknown lambda rule {rule!r}") from None
    value = float(rule)
    if value < 0.0:
        raise ValueError(f"fixed lambda must be >= 0, got {value}")
    return value


def gram_matrix(x: np.ndarray, cs: CandidateSet) -> np.ndarray:
    """Gram matrix of candidate residuals: G_lm = tr(R_l' R_m).

    Because the weights sum to one, w'Gw equals the squared Frobenius
    residual norm of the averaged estimator. Residuals cached in the
    candidate fits are reused; candidates without a cached fit are
    recomputed from their coefficients.
    """
    x = as_data_matrix(x)
    n, p = x.shape
    if cs.p != p:
        raise ValueError(f"candidate set is over {cs.p} nodes but data has {p} columns")
    rows = []
    for mod in cs.models:
        if mod.fit is not None and mod.fit.residuals.shape == (n, p):
            rows.append(mod.fit.residuals.ravel())
        else:
            rows.append((x - x @ mod.coef).ravel())
    v = np.stack(rows)
    g = v @ v.T
    return (g + g.T) / 2.0


def _floor_psd(g: np.ndarray) -> np.ndarray:
    """Symmetrize and clip negative eigenvalues at zero."""
    g = np.asarray(g, dtype=np.float64)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError(f"gram matrix must be square, got {g.shape}")
    if not np.all(np.isfinite(g)):
        raise ValueError("gram matrix has non-finite entries")
    g = (g + g.T) / 2.0
    eigvals, eigvecs = np.linalg.eigh(g)
    if eigvals[0] >= 0.0:
        return g
    floored = (eigvecs * np.maximum(eigvals, 0.0)) @ eigvecs.T
    return (floored + floored.T) / 2.0


def _face_optimum(g: np.ndarray, c: np.ndarray, support: list[int], w: np.ndarray) -> np.ndarray:
    """Exact minimizer of w'Gw + c'w on the face spanned by ``support``.

    The sum-to-one affine hull of the active coordinates is parametrized
    by an orthonormal basis of sum-zero directions and the reduced
    convex quadratic is minimized through an eigendecomposition. A
    ratio test walks from the current feasible point toward that target
    and drops any coordinate pinned at zero. When the reduced Hessian is
    singular with nonzero slope along a null direction the affine
    problem is unbounded below; the walk then follows that descent ray
    to the face boundary instead. ``w`` must be feasible with support
    inside ``support``; coordinates outside stay exactly zero.
    """
    w = w.copy()
    active = list(support)
    while True:
        s = np.array(active)
        if len(s) == 1:
            w[:] = 0.0
            w[s[0]] = 1.0
            return w
        ws = w[s]
        z = np.linalg.qr(np.ones((len(s), 1)), mode="complete")[0][:, 1:]
        gs = g[np.ix_(s, s)]
        h = z.T @ gs @ z
        grad0 = z.T @ (2.0 * gs @ ws + c[s])
        eigvals, eigvecs = np.linalg.eigh((h + h.T) / 2.0)
        coef = eigvecs.T @ grad0
        null = eigvals <= 1e-12 * max(1.0, float(eigvals[-1]))
        null_slope = np.where(null, coef, 0.0)
        limit = np.inf
        if float(np.abs(null_slope).max()) > 1e-12:
            direction = -(z @ (eigvecs @ null_slope))
            direction /= float(np.linalg.norm(direction))
        else:
            u = -np.where(null, 0.0, coef / np.maximum(2.0 * eigvals, 1e-300))
            target = ws + z @ (eigvecs @ u)
            target[(target < 0.0) & (target > -1e-13)] = 0.0
            if np.all(target >= 0.0):
                w[:] = 0.0
                w[s] = target
                return w
            direction = target - ws
            limit = 1.0
        blocking = direction < 0.0
        steps = np.where(blocking, ws / np.where(blocking, -direction, 1.0), np.inf)
        alpha = min(float(steps.min()), limit)
        ws_new = ws + alpha * direction
        ws_new[steps <= alpha] = 0.0
        w[:] = 0.0
        w[s] = np.maximum(ws_new, 0.0)
        active = [i for i, wi in zip(active, w[s]) if wi > 0.0]


def _kkt_residual(g: np.ndarray, c: np.ndarray, w: np.ndarray) -> float:
    """Stationarity spread on the support, plus feasibility violations.

    With mu = min_i grad_i, optimality requires grad_i = mu on the
    support (off-support components satisfy grad_i >= mu by choice of
    mu). The returned value is the largest violation of stationarity,
    nonnegativity and the sum-to-one constraint.
    """
    grad = 2.0 * (g @ w) + c
    mu = float(grad.min())
    support = w > 0.0
    stationarity = float(np.max(np.abs(grad[support] - mu))) if support.any() else 0.0
    feasibility = max(abs(float(w.sum()) - 1.0), float(max(0.0, -w.min())))
    return max(stationarity, feasibility)


def solve_weights(
    g: np.ndarray, k: np.ndarray, lam: float, cfg: AveragingConfig | None = None
) -> WeightSolution:
    """Minimize w'Gw + lam * w'k over the probability simplex.

    ``g`` is symmetrized and eigenvalue-floored at zero on input; ``k``
    is the penalty vector (edge counts, possibly pre-scaled by a
    variance plug-in). Ties in vertex selection break toward the
    smallest index, so the solver is fully deterministic.

    Tolerances are scale-free: the problem is normalized internally by
    the largest coefficient magnitude (the argmin is unchanged), and the
    duality gap and reported ``kkt_residual`` refer to that normalized
    problem. ``objective`` is reported in the original units.
    """
    cfg = cfg or AveragingConfig()
    g = _floor_psd(g)
    m = g.shape[0]
    k = np.asarray(k, dtype=np.float64)
    if k.shape != (m,):
        raise ValueError(f"penalty vector has shape {k.shape}, expected ({m},)")
    if not np.all(np.isfinite(k)) or np.any(k < 0.0):
        raise ValueError("penalty vector must be finite and nonnegative")
    if lam < 0.0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    c = lam * k
    scale = max(1.0, float(np.abs(g).max()), float(np.abs(c).max()))
    gn = g / scale
    cn = c / scale

    vertex_costs = np.diagonal(gn) + cn
    w = np.zeros(m)
    w[int(np.argmin(vertex_costs))] = 1.0

    residual = np.inf
    for _ in range(cfg.qp_max_iters):
        grad = 2.0 * (gn @ w) + cn
        s = int(np.argmin(grad))
        gap = float(grad @ w - grad[s])
        if gap <= cfg.qp_tolerance:
            residual = _kkt_residual(gn, cn, w)
            if residual <= cfg.qp_tolerance:
                break
        support = [i for i in range(m) if w[i] > 0.0]
        if s not in support:
            support.append(s)
            support.sort()
        w_next = _face_optimum(gn, cn, support, w)
        if gap <= cfg.qp_tolerance and np.array_equal(w_next, w):
            # Face-optimal and no vertex improves the linearization, yet
            # the certificate failed: report honestly rather than spin.
            raise NotConvergedError(cfg.qp_max_iters, residual)
        w = w_next
    else:
        residual = _kkt_residual(gn, cn, w)
        if residual > cfg.qp_tolerance:
            raise NotConvergedError(cfg.qp_max_iters, residual)

    w = np.maximum(w, 0.0)
    w /= w.sum()
    residual = _kkt_residual(gn, cn, w)
    if residual > cfg.qp_tolerance:
        raise NotConvergedError(cfg.qp_max_iters, residual)
    w.flags.writeable = False
    check_weight_vector(w, m)
    objective = float(w @ g @ w + lam * (k @ w))
    c.flags.writeable = False
    return WeightSolution(w=w, objective=objective, kkt_residual=residual, gram=g, penalty=c)


def average_estimator(cs: CandidateSet, w: np.ndarray) -> np.ndarray:
    """Convex combination of the candidate coefficient matrices."""
    w = check_weight_vector(np.asarray(w, dtype=np.float64), len(cs))
    stacked = np.stack(cs.coefs)
    a_w = np.tensordot(w, stacked, axes=1)
    a_w.flags.writeable = False
    return a_w
