import numpy as np
import pytest

from dagavg.graphs import CandidateModel, CandidateSet, Dag
from dagavg.leastsquares import fit_edgeset


def random_dag_edges(rng, p, prob):
    """Random acyclic edge tuple: random node order, edges only along it."""
    order = rng.permutation(p)
    edges = []
    for a in range(p):
        for b in range(a + 1, p):
            if rng.random() < prob:
                edges.append((int(order[a]), int(order[b])))
    return tuple(edges)


def bipartite_noise_free(rng, n, n_roots=3, n_children=3, coef=0.5):
    """Noise-free SEM realization with full-rank parent blocks.

    Roots carry independent unit noise; each child is an exact linear
    function of a nonempty subset of roots. Fitting the true edge set
    therefore reproduces the coefficients up to roundoff, and any parent
    subset (all roots) has full column rank almost surely.
    """
    p = n_roots + n_children
    a0 = np.zeros((p, p))
    for j in range(n_roots, p):
        parents = [r for r in range(n_roots) if rng.random() < 0.6]
        if not parents:
            parents = [int(rng.integers(0, n_roots))]
        a0[parents, j] = coef
    x = np.zeros((n, p))
    x[:, :n_roots] = rng.standard_normal((n, n_roots))
    x[:, n_roots:] = x[:, :n_roots] @ a0[:n_roots, n_roots:]
    return a0, x


def nested_candidate_set(x, edge_lists):
    """Fit a CandidateSet from explicitly nested edge lists."""
    p = x.shape[1]
    models = []
    for edges in edge_lists:
        d = Dag(p, tuple(edges))
        fit = fit_edgeset(x, d)
        models.append(CandidateModel(edges=d, coef=fit.a_hat, k=d.n_edges, fit=fit))
    return CandidateSet(p=p, models=tuple(models))


@pytest.fixture
def rng():
    return np.random.default_rng(0)
