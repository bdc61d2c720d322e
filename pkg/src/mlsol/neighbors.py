"""Exact brute-force k-nearest-neighbour search under Euclidean distance.

Ties in distance are always broken by ascending instance index, so neighbour
lists are fully reproducible.
"""
import math
from dataclasses import dataclass

import numpy as np

# Upper bound on float64 cells held by one block of pairwise differences.
_BLOCK_CELLS = 1 << 23


@dataclass(frozen=True)
class NeighborIndex:
    """Per-instance neighbour lists.

    Attributes
    ----------
    k : int
    neighbor_ids : ndarray of shape (n, k)
        Row ``i`` lists the ``k`` nearest other instances, nearest first.
    neighbor_dists : ndarray of shape (n, k)
        Matching Euclidean distances, nondecreasing along each row.
    """

    k: int
    neighbor_ids: np.ndarray
    neighbor_dists: np.ndarray

    def __len__(self):
        return self.neighbor_ids.shape[0]


def euclidean(a, b):
    """Euclidean distance between two vectors of equal length."""
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.size} vs {b.size}")
    diff = a - b
    return math.sqrt(float(np.dot(diff, diff)))


def _squared_distances(queries, points):
    """Block of squared distances, computed from explicit differences."""
    diff = queries[:, None, :] - points[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _smallest_k(row, k):
    """Indices of the k smallest entries of ``row``, ordered by (value, index)."""
    if k < row.size:
        kth = np.partition(row, k - 1)[k - 1]
        cand = np.flatnonzero(row <= kth)
    else:
        cand = np.arange(row.size)
    order = np.argsort(row[cand], kind="stable")
    return cand[order[:k]]


def _search(points, queries, k, exclude_self):
    n, d = points.shape
    m = queries.shape[0]
    ids = np.empty((m, k), dtype=np.intp)
    dists = np.empty((m, k))
    block = max(1, _BLOCK_CELLS // max(1, n * max(d, 1)))
    for start in range(0, m, block):
        stop = min(m, start + block)
        sq = _squared_distances(queries[start:stop], points)
        if exclude_self:
            sq[np.arange(stop - start), np.arange(start, stop)] = np.inf
        for r in range(stop - start):
            chosen = _smallest_k(sq[r], k)
            ids[start + r] = chosen
            dists[start + r] = np.sqrt(sq[r, chosen])
    return ids, dists


def build_knn(dataset, k):
    """k nearest neighbours of every instance of ``dataset``, self excluded.

    Accepts a :class:`~mlsol.dataset.MultiLabelDataset` or a bare (n, d) array.
    """
    x = _features(dataset)
    n = x.shape[0]
    if not 1 <= k < n:
        raise ValueError(f"k must satisfy 1 <= k < n (k={k}, n={n})")
    ids, dists = _search(x, x, k, exclude_self=True)
    ids.setflags(write=False)
    dists.setflags(write=False)
    return NeighborIndex(k, ids, dists)


def knn_query(dataset, queries, k):
    """k nearest training instances for each row of ``queries``.

    Returns ``(ids, dists)`` arrays of shape (m, k).
    """
    x = _features(dataset)
    queries = np.asarray(queries, dtype=np.float64)
    if queries.ndim == 1:
        queries = queries[None, :]
    if queries.shape[1] != x.shape[1]:
        raise ValueError(f"dimension mismatch: query has {queries.shape[1]} features, data has {x.shape[1]}")
    if not 1 <= k <= x.shape[0]:
        raise ValueError(f"k must satisfy 1 <= k <= n (k={k}, n={x.shape[0]})")
    return _search(x, queries, k, exclude_self=False)


def knn_of_point(dataset, x, k):
    """List of ``(index, distance)`` for the k training instances nearest to ``x``."""
    ids, dists = knn_query(dataset, np.asarray(x, dtype=np.float64).reshape(1, -1), k)
    return [(int(i), float(v)) for i, v in zip(ids[0], dists[0])]


def _features(dataset):
    x = getattr(dataset, "features", dataset)
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"expected a 2-D feature matrix, got shape {x.shape}")
    return x
