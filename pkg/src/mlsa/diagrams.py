"""Bottleneck and Wasserstein distances between persistence diagrams.

The ground metric is the sup-norm on the plane, so a dot ``(b, d)`` sits at
distance ``(d - b) / 2`` from the diagonal.  Essential dots (infinite death)
can only be matched to essential dots; their cost is the difference of the
births, and matching them in sorted order is optimal.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .persistence import PersistenceDiagram, restrict_to_cap


def _split(d1: PersistenceDiagram, d2: PersistenceDiagram):
    if d1.degree != d2.degree:
        raise ValueError(f"degree mismatch: {d1.degree} vs {d2.degree}")
    e1, e2 = np.sort(d1.essential[:, 0]), np.sort(d2.essential[:, 0])
    if len(e1) != len(e2):
        return None, d1.finite, d2.finite
    return np.abs(e1 - e2), d1.finite, d2.finite


def _cost_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Diagonal-augmented (n+m) x (n+m) sup-norm cost matrix.

    Rows ``n..n+m-1`` and columns ``m..m+n-1`` are diagonal copies.  Any
    diagonal copy may take the place of any other, so diagonal-to-diagonal
    entries cost nothing.
    """
    n, m = len(a), len(b)
    size = n + m
    cost = np.zeros((size, size))
    if n and m:
        cost[:n, :m] = np.maximum(np.abs(a[:, None, 0] - b[None, :, 0]),
                                  np.abs(a[:, None, 1] - b[None, :, 1]))
    ha = (a[:, 1] - a[:, 0]) / 2 if n else np.empty(0)
    hb = (b[:, 1] - b[:, 0]) / 2 if m else np.empty(0)
    cost[:n, m:] = np.inf
    cost[n:, :m] = np.inf
    if n:
        cost[np.arange(n), m + np.arange(n)] = ha
    if m:
        cost[n + np.arange(m), np.arange(m)] = hb
    return cost


def _perfect_matching_exists(cost: np.ndarray, eps: float) -> bool:
    graph = csr_matrix(cost <= eps)
    match = maximum_bipartite_matching(graph, perm_type="column")
    return bool(np.all(match >= 0))


def bottleneck(d1: PersistenceDiagram, d2: PersistenceDiagram) -> float:
    """Bottleneck distance under the sup-norm ground metric.

    Binary search over the finite set of candidate costs; the answer is the
    smallest candidate admitting a perfect matching, so no tolerance is
    involved.
    """
    ess, a, b = _split(d1, d2)
    if ess is None:
        return float("inf")
    floor = float(ess.max()) if len(ess) else 0.0
    if len(a) + len(b) == 0:
        return floor
    cost = _cost_matrix(a, b)
    cand = np.unique(np.concatenate([[0.0], cost[np.isfinite(cost)]]))
    cand = cand[cand >= floor]
    if len(cand) == 0 or cand[0] > floor:
        cand = np.concatenate([[floor], cand])
    lo, hi = 0, len(cand) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _perfect_matching_exists(cost, cand[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(cand[lo])


def wasserstein(d1: PersistenceDiagram, d2: PersistenceDiagram, p: float = 1.0) -> float:
    """p-Wasserstein distance via a minimum-cost perfect matching."""
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    ess, a, b = _split(d1, d2)
    if ess is None:
        return float("inf")
    total = float(np.sum(ess ** p))
    if len(a) + len(b):
        cost = _cost_matrix(a, b)
        big = np.where(np.isfinite(cost), cost, 0).max() + 1.0
        cp = np.where(np.isfinite(cost), cost ** p, (big ** p) * (len(cost) + 1))
        rows, cols = linear_sum_assignment(cp)
        total += float(cp[rows, cols].sum())
    return total ** (1.0 / p)


def top_k_persistences(d: PersistenceDiagram, k: int, cap: float) -> np.ndarray:
    """The ``k`` largest persistences after capping at ``cap``, zero-padded."""
    if k < 1:
        raise ValueError("k must be at least 1")
    pers = np.sort(restrict_to_cap(d, cap).persistences)[::-1][:k]
    out = np.zeros(k)
    out[: len(pers)] = pers
    return out
