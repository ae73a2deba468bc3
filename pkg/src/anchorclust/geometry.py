"""Point storage and brute-force Euclidean neighbor queries.

All neighbor queries break distance ties in favour of the smaller point
index. Comparisons are done on squared distances computed by explicit
coordinate differences (``scipy.spatial.distance.cdist``), so points with
integer coordinates produce exact ties.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.spatial.distance import cdist

from .errors import InputError

# Upper bound on the number of distance entries held in memory at once.
_BLOCK_ENTRIES = 1 << 22


@dataclass(frozen=True, eq=False)
class PointSet:
    """``n`` points in ``R^d`` with optional integer ground-truth labels."""

    points: np.ndarray
    labels: Optional[np.ndarray] = None

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise InputError(f"points must be a non-empty n x d array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise InputError("points contain NaN or infinite coordinates")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.labels is not None:
            lab = np.asarray(self.labels)
            if lab.shape != (pts.shape[0],):
                raise InputError(f"expected {pts.shape[0]} labels, got shape {lab.shape}")
            if lab.size and not np.issubdtype(lab.dtype, np.integer):
                if not np.all(lab == np.round(lab)):
                    raise InputError("labels must be integers")
            lab = lab.astype(np.int64)
            if lab.min() < 0:
                raise InputError("labels must be non-negative")
            lab.setflags(write=False)
            object.__setattr__(self, "labels", lab)

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def d(self):
        return self.points.shape[1]

    @property
    def has_labels(self):
        return self.labels is not None

    def subset(self, indices):
        """PointSet restricted to ``indices`` (labels carried along)."""
        idx = np.asarray(indices, dtype=np.int64)
        labels = None if self.labels is None else self.labels[idx]
        return PointSet(self.points[idx], labels)


class NeighborList(NamedTuple):
    owner: int
    indices: np.ndarray
    distances: np.ndarray
    K: int


def euclidean_distance(a, b):
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise InputError(f"dimension mismatch: {a.size} vs {b.size}")
    return float(np.sqrt(np.sum((a - b) ** 2)))


def _check_K(n, K):
    if K < 1 or K > n - 1:
        raise InputError(f"K must satisfy 1 <= K <= n-1 (n={n}), got K={K}")


def _rows_smallest(d2, K):
    """Column indices of the ``K`` smallest entries of each row of ``d2``.

    Rows are ordered by (value, column index), which is what a stable sort
    of the full row would give.
    """
    rows = d2.shape[0]
    part = np.argpartition(d2, K - 1, axis=1)[:, :K]
    vals = np.take_along_axis(d2, part, axis=1)
    kth = vals.max(axis=1)
    # lexsort: last key is primary
    order = np.lexsort((part, vals), axis=1)
    idx = np.take_along_axis(part, order, axis=1)
    # argpartition picks arbitrarily among entries equal to the K-th value;
    # redo those rows with an exact stable sort.
    ties = np.count_nonzero(d2 <= kth[:, None], axis=1) > K
    for r in np.flatnonzero(ties):
        idx[r] = np.argsort(d2[r], kind="stable")[:K]
    return idx if rows else idx.reshape(0, K)


def knn_all(points, K):
    """K nearest neighbors of every point, excluding the point itself.

    Returns ``(indices, sq_distances)``, both of shape ``(n, K)``, rows
    ascending by distance with index tie-break.
    """
    X = points.points
    n = X.shape[0]
    _check_K(n, K)
    out_idx = np.empty((n, K), dtype=np.int64)
    out_d2 = np.empty((n, K), dtype=np.float64)
    block = max(1, _BLOCK_ENTRIES // n)
    for start in range(0, n, block):
        stop = min(n, start + block)
        d2 = cdist(X[start:stop], X, "sqeuclidean")
        d2[np.arange(stop - start), np.arange(start, stop)] = np.inf
        idx = _rows_smallest(d2, K)
        out_idx[start:stop] = idx
        out_d2[start:stop] = np.take_along_axis(d2, idx, axis=1)
    return out_idx, out_d2


def knn(points, query, K):
    """Neighbor list of point ``query`` within ``points``."""
    n = points.n
    _check_K(n, K)
    if not 0 <= query < n:
        raise InputError(f"query index {query} out of range for n={n}")
    d2 = cdist(points.points[query:query + 1], points.points, "sqeuclidean")
    d2[0, query] = np.inf
    idx = _rows_smallest(d2, K)[0]
    return NeighborList(int(query), idx, np.sqrt(d2[0, idx]), K)


def nearest_anchors(anchors, queries):
    """Index of and distance to the nearest anchor for each query row.

    ``anchors`` and ``queries`` are arrays (or PointSets). Ties go to the
    smaller anchor index.
    """
    A = anchors.points if isinstance(anchors, PointSet) else np.asarray(anchors, dtype=np.float64)
    Q = queries.points if isinstance(queries, PointSet) else np.asarray(queries, dtype=np.float64)
    if A.ndim == 1:
        A = A[:, None]
    if Q.ndim == 1:
        Q = Q[None, :]
    if A.shape[0] == 0:
        raise InputError("anchor set is empty")
    if A.shape[1] != Q.shape[1]:
        raise InputError(f"dimension mismatch: anchors d={A.shape[1]}, queries d={Q.shape[1]}")
    m = A.shape[0]
    nq = Q.shape[0]
    idx = np.empty(nq, dtype=np.int64)
    dist = np.empty(nq, dtype=np.float64)
    block = max(1, _BLOCK_ENTRIES // m)
    for start in range(0, nq, block):
        stop = min(nq, start + block)
        d2 = cdist(Q[start:stop], A, "sqeuclidean")
        j = d2.argmin(axis=1)  # first occurrence -> smaller index on ties
        idx[start:stop] = j
        dist[start:stop] = d2[np.arange(stop - start), j]
    return idx, np.sqrt(dist)


def nearest_anchor(anchors, query):
    """``(anchor index, distance)`` of the anchor closest to one query point."""
    q = np.asarray(query, dtype=np.float64).ravel()
    idx, dist = nearest_anchors(anchors, q[None, :])
    return int(idx[0]), float(dist[0])
