"""Core graph and array types with their validation.

Node indices are 0-based everywhere inside the library; file formats
translate to and from header names at the boundary. Edge sets are kept
as sorted tuples of ``(parent, child)`` pairs so that iteration order,
and therefore greedy tie-breaking, is deterministic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .errors import DataError

if TYPE_CHECKING:
    from .leastsquares import FitResult

__all__ = [
    "Dag",
    "CandidateModel",
    "CandidateSet",
    "validate_dag",
    "topological_order",
    "support_dag",
    "check_candidate_set",
    "as_data_matrix",
    "check_coef_matrix",
    "check_weight_vector",
]

Edge = tuple[int, int]


@dataclass(frozen=True)
class Dag:
    """A directed graph on ``p`` nodes given by (parent, child) pairs.

    The constructor normalizes the edge list (sorted, deduplicated) and
    checks index ranges, but deliberately does not reject cycles or
    self-loops; :func:`validate_dag` is the acyclicity predicate.
    """

    p: int
    edges: tuple[Edge, ...] = field(default=())

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"node count must be positive, got {self.p}")
        normalized = []
        for k, j in self.edges:
            k, j = int(k), int(j)
            if not (0 <= k < self.p and 0 <= j < self.p):
                raise ValueError(f"edge ({k}, {j}) out of range for p={self.p}")
            normalized.append((k, j))
        object.__setattr__(self, "edges", tuple(sorted(set(normalized))))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, k: int, j: int) -> bool:
        return (k, j) in set(self.edges)

    def parent_lists(self) -> list[list[int]]:
        """Parents of each node, ascending within each list."""
        parents: list[list[int]] = [[] for _ in range(self.p)]
        for k, j in self.edges:
            parents[j].append(k)
        return parents

    def with_edge(self, k: int, j: int) -> "Dag":
        return Dag(self.p, self.edges + ((k, j),))

    def without_edge(self, k: int, j: int) -> "Dag":
        return Dag(self.p, tuple(e for e in self.edges if e != (k, j)))


def topological_order(d: Dag) -> list[int]:
    """Kahn's algorithm; ties broken by smallest node index.

    Raises ValueError if the graph has a cycle or a self-loop.
    """
    indeg = [0] * d.p
    children: list[list[int]] = [[] for _ in range(d.p)]
    for k, j in d.edges:
        if k == j:
            raise ValueError(f"self-loop at node {k}")
        indeg[j] += 1
        children[k].append(j)
    ready = deque(sorted(i for i in range(d.p) if indeg[i] == 0))
    order: list[int] = []
    while ready:
        u = ready.popleft()
        order.append(u)
        newly = []
        for v in children[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                newly.append(v)
        for v in sorted(newly):
            ready.append(v)
    if len(order) != d.p:
        raise ValueError("graph contains a directed cycle")
    return order


def validate_dag(d: Dag) -> bool:
    """True iff ``d`` is acyclic with no self-loops (pure predicate)."""
    try:
        topological_order(d)
    except ValueError:
        return False
    return True


def support_dag(a: np.ndarray) -> Dag:
    """Edge set of the exact nonzero pattern of a coefficient matrix.

    The zero test is exact equality: fitting writes exact zeros outside
    the requested edge set, so no rounding is applied here.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"coefficient matrix must be square, got {a.shape}")
    diag = np.diagonal(a)
    if np.any(diag != 0.0):
        bad = int(np.nonzero(diag)[0][0])
        raise ValueError(f"nonzero diagonal entry at node {bad}")
    rows, cols = np.nonzero(a)
    return Dag(a.shape[0], tuple(zip(rows.tolist(), cols.tolist())))


@dataclass(frozen=True)
class CandidateModel:
    """One candidate: its edge set, fitted coefficients and edge count."""

    edges: Dag
    coef: np.ndarray
    k: int
    fit: "FitResult | None" = None


@dataclass(frozen=True)
class CandidateSet:
    """Ordered, strictly nested candidate models E^(1) c ... c E^(M)."""

    p: int
    models: tuple[CandidateModel, ...]

    def __len__(self) -> int:
        return len(self.models)

    @property
    def k_vector(self) -> np.ndarray:
        return np.array([m.k for m in self.models], dtype=np.float64)

    @property
    def coefs(self) -> list[np.ndarray]:
        return [m.coef for m in self.models]


def check_candidate_set(cs: CandidateSet) -> CandidateSet:
    """Enforce the nesting invariants of a candidate set.

    Checks strict proper inclusion of consecutive edge sets, strictly
    increasing edge counts, acyclicity of every candidate, and that each
    fitted support stays inside its edge set.
    """
    if len(cs) < 1:
        raise ValueError("candidate set is empty")
    prev: set | None = None
    for idx, mod in enumerate(cs.models, start=1):
        if mod.edges.p != cs.p:
            raise ValueError(f"candidate {idx} is over {mod.edges.p} nodes, expected {cs.p}")
        if mod.k != mod.edges.n_edges:
            raise ValueError(f"candidate {idx} has k={mod.k} but {mod.edges.n_edges} edges")
        if not validate_dag(mod.edges):
            raise ValueError(f"candidate {idx} edge set is cyclic")
        cur = set(mod.edges.edges)
        if prev is not None and not (prev < cur):
            raise ValueError(f"candidate {idx} does not properly contain candidate {idx - 1}")
        fitted = set(support_dag(mod.coef).edges)
        if not fitted <= cur:
            raise ValueError(f"candidate {idx} has fitted entries outside its edge set")
        prev = cur
    return cs


def as_data_matrix(x) -> np.ndarray:
    """Validate and return an n x p float64 data matrix.

    Requires a 2-d array with n >= 2, p >= 1 and all entries finite.
    Non-finite entries raise :class:`DataError` (data content problem);
    shape problems raise ValueError (caller bug).
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"data matrix must be 2-dimensional, got shape {x.shape}")
    n, p = x.shape
    if n < 2 or p < 1:
        raise ValueError(f"need n >= 2 and p >= 1, got n={n}, p={p}")
    if not np.all(np.isfinite(x)):
        bad = np.argwhere(~np.isfinite(x))[0]
        raise DataError(f"non-finite value at row {bad[0]}, column {bad[1]}")
    return x


def check_coef_matrix(a: np.ndarray, p: int | None = None) -> np.ndarray:
    """Validate a coefficient matrix: square, finite, zero diagonal, acyclic support."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"coefficient matrix must be square, got {a.shape}")
    if p is not None and a.shape[0] != p:
        raise ValueError(f"expected p={p}, got {a.shape[0]}")
    if not np.all(np.isfinite(a)):
        raise ValueError("coefficient matrix has non-finite entries")
    d = support_dag(a)
    if not validate_dag(d):
        raise ValueError("coefficient matrix support contains a directed cycle")
    return a


def check_weight_vector(w: np.ndarray, m: int | None = None, tol: float = 1e-12) -> np.ndarray:
    """Validate a simplex weight vector: entries in [0, 1], sum 1 within tol."""
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 1:
        raise ValueError(f"weight vector must be 1-dimensional, got shape {w.shape}")
    if m is not None and w.shape[0] != m:
        raise ValueError(f"expected {m} weights, got {w.shape[0]}")
    if np.any(w < 0.0) or np.any(w > 1.0):
        raise ValueError("weights must lie in [0, 1]")
    if abs(float(w.sum()) - 1.0) > tol:
        raise ValueError(f"weights sum to {w.sum()!r}, not 1 within {tol}")
    return w
