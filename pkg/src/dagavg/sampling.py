"""Ground-truth DAG generation and Gaussian SEM sampling.

Randomness contract
-------------------
All draws come from numpy's ``default_rng`` (PCG64). Gaussian variates
use ``Generator.standard_normal``, a ziggurat-class inverse-free method,
so results are bit-reproducible for a fixed seed within one numpy build.
Callers running replication sweeps derive per-replication seeds with
:func:`derive_seeds`, which hashes ``(base_seed, *components)`` through
``numpy.random.SeedSequence`` and spawns one child stream per purpose in
a fixed order. Parallel scheduling therefore never changes any draw.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Dag, support_dag, topological_order

__all__ = [
    "SynthConfig",
    "generate_true_dag",
    "sample_data",
    "true_precision",
    "derive_seeds",
]


@dataclass(frozen=True)
class SynthConfig:
    """Parameters of the synthetic ground-truth mechanism.

    ``p`` nodes are placed in the natural order 1..p; each strictly
    lower off-diagonal entry of the coefficient matrix independently
    equals ``coef`` with probability ``rho``. Noise is N(0, sigma^2).
    """

    p: int
    rho: float
    coef: float = 0.5
    sigma: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"p must be >= 1, got {self.p}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")
        if self.sigma <= 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


def generate_true_dag(cfg: SynthConfig) -> np.ndarray:
    """Draw a strictly lower-triangular coefficient matrix.

    Entry (i, j) with i > j is ``coef`` with probability ``rho``, else 0.
    Deterministic given ``cfg.seed``.
    """
    rng = np.random.default_rng(cfg.seed)
    u = rng.random((cfg.p, cfg.p))
    lower = np.tri(cfg.p, k=-1, dtype=bool)
    a0 = np.where(lower & (u < cfg.rho), cfg.coef, 0.0)
    a0.flags.writeable = False
    return a0


def sample_data(a0: np.ndarray, sigma: float, n: int, seed: int) -> np.ndarray:
    """Draw ``n`` i.i.d. rows of the linear Gaussian SEM x = z (I - A0)^{-1}.

    Columns are filled in topological order of support(a0), so the
    triangular system is solved by forward substitution rather than by
    inverting (I - A0). The topological sort doubles as the defensive
    acyclicity check: a cyclic support raises ValueError.
    """
    a0 = np.asarray(a0, dtype=np.float64)
    if sigma <= 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    d = support_dag(a0)
    order = topological_order(d)
    parents = d.parent_lists()
    rng = np.random.default_rng(seed)
    x = sigma * rng.standard_normal((n, a0.shape[0]))
    for j in order:
        pa = parents[j]
        if pa:
            x[:, j] += x[:, pa] @ a0[pa, j]
    x.flags.writeable = False
    return x


def true_precision(a0: np.ndarray, sigma: float) -> np.ndarray:
    """Precision matrix (I - A0)(I - A0)^T / sigma^2 of the SEM."""
    a0 = np.asarray(a0, dtype=np.float64)
    if sigma <= 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    b = np.eye(a0.shape[0]) - a0
    omega = (b @ b.T) / (sigma * sigma)
    return (omega + omega.T) / 2.0


def derive_seeds(base_seed: int, components: tuple[int, ...], n_streams: int) -> list[int]:
    """Derive ``n_streams`` independent 64-bit seeds from a base seed.

    The derivation feeds ``(base_seed, *components)`` as the entropy of a
    ``SeedSequence`` and spawns children in order, so any replication of
    a sweep can be re-run in isolation with identical draws.
    """
    ss = np.random.SeedSequence([int(base_seed)] + [int(c) for c in components])
    children = ss.spawn(n_streams)
    return [int(c.generate_state(2, np.uint32).view(np.uint64)[0]) for c in children]
