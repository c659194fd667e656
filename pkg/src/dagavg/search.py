"""Nested candidate generation by greedy forward/backward search.

The data is split once into training and validation halves. An initial
graph (hill-climbing BIC by default, or a user-supplied DAG) becomes the
middle candidate; the forward phase grows it one edge at a time by
maximizing the validation log-likelihood of the training fit, and the
backward phase shrinks it the same way. The resulting edge sets are
strictly nested by construction and every candidate is refit on the full
sample.

Greedy scans keep per-column residual state so a candidate edge costs
one small QR factorization instead of a full refit; the scores agree
with :func:`validation_score` because both paths share the same
per-column solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import RankDeficientError, SearchExhaustedError, TooManyParentsError
from .graphs import CandidateModel, CandidateSet, Dag, as_data_matrix, check_candidate_set, validate_dag
from .leastsquares import fit_edgeset, ols_column, rank_ratio

__all__ = [
    "SearchConfig",
    "split_data",
    "initial_graph",
    "validation_score",
    "build_candidates",
]


@dataclass(frozen=True)
class SearchConfig:
    """Settings for candidate generation.

    ``m_candidates`` must be odd so the initial graph sits exactly in
    the middle; 1 is allowed as the degenerate single-candidate case.
    ``split_seed`` drives the train/validation split, the only random
    ingredient of the search.
    """

    m_candidates: int = 11
    split_seed: int = 0
    initializer: str = "greedy_bic"
    initial_dag: Dag | None = None
    max_parents: int | None = None

    def __post_init__(self):
        if self.m_candidates < 1 or self.m_candidates % 2 == 0:
            raise ValueError(
                f"m_candidates must be an odd positive integer, got {self.m_candidates}"
            )
        if self.initializer not in ("greedy_bic", "user_supplied"):
            raise ValueError(f"unknown initializer {self.initializer!r}")
        if self.initializer == "user_supplied":
            if self.initial_dag is None:
                raise ValueError("user_supplied initializer requires initial_dag")
            if not validate_dag(self.initial_dag):
                raise ValueError("initial_dag must be acyclic")
        if self.max_parents is not None and self.max_parents < 0:
            raise ValueError("max_parents must be nonnegative")


def split_data(x: np.ndarray, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Random disjoint row split into floor(n/2) training, ceil(n/2) validation.

    Rows keep their original relative order inside each half; the
    partition is uniform over splits and deterministic given ``seed``.
    """
    x = as_data_matrix(x)
    n = x.shape[0]
    if n < 4:
        raise ValueError(f"need n >= 4 to split, got {n}")
    perm = np.random.default_rng(seed).permutation(n)
    train_idx = np.sort(perm[: n // 2])
    valid_idx = np.sort(perm[n // 2 :])
    return x[train_idx], x[valid_idx]


class _ColumnState:
    """Per-column fit bookkeeping for one greedy phase.

    Tracks the parent lists and the training/validation residual sums of
    squares of the current edge set. Trial edits refit only the touched
    column through the same QR path as :func:`fit_edgeset`.
    """

    def __init__(self, train: np.ndarray, valid: np.ndarray | None, parents: list[list[int]]):
        self.train = train
        self.valid = valid
        self.parents = [list(pa) for pa in parents]
        p = train.shape[1]
        self.train_rss = np.empty(p)
        self.valid_rss = np.zeros(p)
        for j in range(p):
            self.train_rss[j], self.valid_rss[j] = self._column_rss(j, self.parents[j])

    def _column_rss(self, j: int, pa: list[int]) -> tuple[float, float]:
        nt = self.train.shape[0]
        if not pa:
            rt = self.train[:, j]
            rv = self.valid[:, j] if self.valid is not None else None
            return float(rt @ rt), float(rv @ rv) if rv is not None else 0.0
        if len(pa) >= nt:
            raise TooManyParentsError(j, len(pa), nt)
        fitted = ols_column(self.train[:, pa], self.train[:, j])
        if fitted is None:
            raise RankDeficientError(j, rank_ratio(self.train[:, pa]))
        beta, resid = fitted
        if self.valid is None:
            return float(resid @ resid), 0.0
        rv = self.valid[:, j] - self.valid[:, pa] @ beta
        return float(resid @ resid), float(rv @ rv)

    def trial_totals(self, j: int, pa_new: list[int]) -> tuple[float, float]:
        """Total train/valid rss if column j used parents ``pa_new``."""
        rt, rv = self._column_rss(j, pa_new)
        return (
            float(self.train_rss.sum() - self.train_rss[j] + rt),
            float(self.valid_rss.sum() - self.valid_rss[j] + rv),
        )

    def apply(self, j: int, pa_new: list[int]) -> None:
        self.parents[j] = list(pa_new)
        self.train_rss[j], self.valid_rss[j] = self._column_rss(j, pa_new)


def _loglik_from_totals(nt: int, nv: int, p: int, rss_train: float, rss_valid: float) -> float:
    sigma2 = rss_train / (nt * p)
    return -0.5 * nv * p * math.log(2.0 * math.pi * sigma2) - 0.5 * rss_valid / sigma2


def validation_score(train: np.ndarray, valid: np.ndarray, e: Dag) -> float:
    """Validation log-likelihood of the training fit of edge set ``e``.

    The training half supplies both the coefficients and the variance
    plug-in sigma2 = rss_train / (n_t p); the score is the Gaussian
    log-likelihood of the validation half at those values. Higher is
    better.
    """
    train = as_data_matrix(train)
    valid = as_data_matrix(valid)
    fit = fit_edgeset(train, e)
    resid_v = valid - valid @ fit.a_hat
    rss_valid = float(np.sum(resid_v * resid_v))
    return _loglik_from_totals(train.shape[0], valid.shape[0], train.shape[1], fit.rss, rss_valid)


def _descendant_matrix(p: int, edges: set[tuple[int, int]]) -> np.ndarray:
    """reach[u, v] True iff a directed path u -> ... -> v exists."""
    children: list[list[int]] = [[] for _ in range(p)]
    for k, j in edges:
        children[k].append(j)
    reach = np.zeros((p, p), dtype=bool)
    for start in range(p):
        stack = list(children[start])
        while stack:
            v = stack.pop()
            if not reach[start, v]:
                reach[start, v] = True
                stack.extend(children[v])
    return reach


def _eligible_additions(
    p: int, edges: set[tuple[int, int]], parents: list[list[int]], nt: int, max_parents: int | None
) -> list[tuple[int, int]]:
    """Absent edges whose addition keeps the graph acyclic and fittable.

    An addition is skipped when it would leave node j with n_t or more
    parents (the fit would be underdetermined) or exceed ``max_parents``.
    """
    reach = _descendant_matrix(p, edges)
    cap = max_parents if max_parents is not None else p - 1
    out = []
    for k in range(p):
        for j in range(p):
            if k == j or (k, j) in edges or reach[j, k]:
                continue
            if len(parents[j]) + 1 > cap or len(parents[j]) + 1 >= nt:
                continue
            out.append((k, j))
    return out


def initial_graph(train: np.ndarray, cfg: SearchConfig) -> Dag:
    """Initial candidate: user-supplied DAG or hill-climbing BIC search.

    The BIC search starts from the empty graph and repeatedly adds the
    acyclicity-preserving edge that most decreases
    n_t p log(rss / (n_t p)) + log(n_t) |E|, stopping when no addition
    improves it.
    """
    train = as_data_matrix(train)
    nt, p = train.shape
    if cfg.initializer == "user_supplied":
        d = cfg.initial_dag
        if d.p != p:
            raise ValueError(f"initial_dag is over {d.p} nodes but data has {p} columns")
        return d

    state = _ColumnState(train, None, [[] for _ in range(p)])
    edges: set[tuple[int, int]] = set()
    log_nt = math.log(nt)
    bic = nt * p * math.log(state.train_rss.sum() / (nt * p))
    while True:
        best: tuple[float, tuple[int, int], list[int]] | None = None
        for k, j in _eligible_additions(p, edges, state.parents, nt, cfg.max_parents):
            pa_new = sorted(state.parents[j] + [k])
            rss_new, _ = state.trial_totals(j, pa_new)
            cand = nt * p * math.log(rss_new / (nt * p)) + log_nt * (len(edges) + 1)
            if best is None or cand < best[0]:
                best = (cand, (k, j), pa_new)
        if best is None or best[0] >= bic:
            return Dag(p, tuple(edges))
        bic = best[0]
        k, j = best[1]
        edges.add((k, j))
        state.apply(j, best[2])


def build_candidates(x: np.ndarray, cfg: SearchConfig) -> CandidateSet:
    """Greedy nested candidate generation around the initial graph.

    The initial graph occupies 1-based position ceil(M/2); the forward
    phase fills the ceil((M-1)/2) larger positions, the backward phase
    the ceil(M/2)-1 smaller ones. Both phases score on the validation
    half and break ties toward the smallest (parent, child) pair, which
    the sorted scan order provides for free. Finally every edge set is
    refit on the full sample.
    """
    x = as_data_matrix(x)
    n, p = x.shape
    train, valid = split_data(x, cfg.split_seed)
    nt, nv = train.shape[0], valid.shape[0]
    e0 = initial_graph(train, cfg)

    m = cfg.m_candidates
    n_forward = m // 2  # ceil((m-1)/2) for odd m
    n_backward = (m + 1) // 2 - 1  # ceil(m/2) - 1

    def score(state: _ColumnState, j: int, pa_new: list[int]) -> float:
        rss_t, rss_v = state.trial_totals(j, pa_new)
        return _loglik_from_totals(nt, nv, p, rss_t, rss_v)

    forward_sets: list[tuple[tuple[int, int], ...]] = []
    if n_forward:
        state = _ColumnState(train, valid, e0.parent_lists())
        edges = set(e0.edges)
        for _ in range(n_forward):
            best: tuple[float, tuple[int, int], list[int]] | None = None
            for k, j in _eligible_additions(p, edges, state.parents, nt, cfg.max_parents):
                pa_new = sorted(state.parents[j] + [k])
                val = score(state, j, pa_new)
                if best is None or val > best[0]:
                    best = (val, (k, j), pa_new)
            if best is None:
                raise SearchExhaustedError(
                    f"forward phase: no eligible edge to add at {len(edges)} edges"
                )
            k, j = best[1]
            edges.add((k, j))
            state.apply(j, best[2])
            forward_sets.append(tuple(sorted(edges)))

    backward_sets: list[tuple[tuple[int, int], ...]] = []
    if n_backward:
        state = _ColumnState(train, valid, e0.parent_lists())
        edges = set(e0.edges)
        for _ in range(n_backward):
            if not edges:
                raise SearchExhaustedError("backward phase: no edge left to remove")
            best = None
            for k, j in sorted(edges):
                pa_new = [q for q in state.parents[j] if q != k]
                val = score(state, j, pa_new)
                if best is None or val > best[0]:
                    best = (val, (k, j), pa_new)
            k, j = best[1]
            edges.remove((k, j))
            state.apply(j, best[2])
            backward_sets.append(tuple(sorted(edges)))

    ordered = list(reversed(backward_sets)) + [e0.edges] + forward_sets
    models = []
    for edge_set in ordered:
        dag = Dag(p, edge_set)
        fit = fit_edgeset(x, dag)
        models.append(CandidateModel(edges=dag, coef=fit.a_hat, k=dag.n_edges, fit=fit))
    return check_candidate_set(CandidateSet(p=p, models=tuple(models)))
