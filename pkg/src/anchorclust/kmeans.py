"""Lloyd's k-means with k-means++ seeding and seeded restarts."""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import InputError
from .partition import Partition, canonical_labels
from .rng import stream


@dataclass(frozen=True, eq=False)
class KMeansResult:
    centroids: np.ndarray
    assignment: Partition
    inertia: float
    iterations: int
    restarts_used: int
    history: tuple = ()  # inertia after each assignment step of the winning restart


def _sq_dists(rows, centers):
    return cdist(rows, centers, "sqeuclidean")


def _plusplus(rows, k, rng):
    n = rows.shape[0]
    chosen = [int(rng.integers(n))]
    closest = _sq_dists(rows, rows[chosen])[:, 0]
    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            nxt = int(np.searchsorted(np.cumsum(closest), rng.random() * total, side="right"))
            nxt = min(nxt, n - 1)
        else:
            nxt = int(rng.integers(n))
        chosen.append(nxt)
        np.minimum(closest, _sq_dists(rows, rows[nxt:nxt + 1])[:, 0], out=closest)
    return rows[chosen].copy()


def _update(rows, labels, centers, d2):
    """New centroids as cluster means; empty clusters restart at far points.

    The point farthest from its current centroid seeds each empty cluster
    (ties to the smaller index); a point is never used twice.
    """
    k, p = centers.shape
    counts = np.bincount(labels, minlength=k)
    sums = np.zeros((k, p))
    np.add.at(sums, labels, rows)
    new = centers.copy()
    nonempty = counts > 0
    new[nonempty] = sums[nonempty] / counts[nonempty, None]
    empty = np.flatnonzero(~nonempty)
    if empty.size:
        own = d2[np.arange(rows.shape[0]), labels].copy()
        for j in empty:
            far = int(np.argmax(own))
            new[j] = rows[far]
            own[far] = -np.inf
    return new


def _lloyd(rows, centers, max_iter):
    d2 = _sq_dists(rows, centers)
    labels = d2.argmin(axis=1)
    history = [float(d2[np.arange(rows.shape[0]), labels].sum())]
    it = 0
    for it in range(1, max_iter + 1):
        centers = _update(rows, labels, centers, d2)
        d2 = _sq_dists(rows, centers)
        new_labels = d2.argmin(axis=1)
        history.append(float(d2[np.arange(rows.shape[0]), new_labels].sum()))
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    return centers, labels, history, it


def kmeans(rows, k, seed=0, restarts=10, max_iter=300):
    """Best-of-``restarts`` k-means clustering of the rows of ``rows``.

    Restart ``r`` draws its k-means++ seeds from the stream
    ``(seed, "kmeans", r)``, so results do not depend on execution order.
    Labels are renumbered by first member; the winning restart is the one
    with the lowest inertia (earliest on ties).
    """
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim == 1:
        rows = rows[:, None]
    n = rows.shape[0]
    if not 1 <= k <= n:
        raise InputError(f"k must satisfy 1 <= k <= n (n={n}), got {k}")
    if restarts < 1:
        raise InputError("restarts must be >= 1")

    best = None
    for r in range(restarts):
        rng = stream(seed, "kmeans", r)
        centers, labels, history, iters = _lloyd(rows, _plusplus(rows, k, rng), max_iter)
        inertia = history[-1]
        if best is None or inertia < best[0]:
            best = (inertia, centers, labels, history, iters)

    inertia, centers, labels, history, iters = best
    canon = canonical_labels(labels)
    used = int(canon.max()) + 1
    # centroid slots in order of first member; unused slots go last
    order = list(dict.fromkeys(labels.tolist()))
    order += [j for j in range(k) if j not in set(order)]
    centers = centers[order]
    return KMeansResult(
        centroids=centers,
        assignment=Partition(canon, k, degenerate=used < k),
        inertia=float(inertia),
        iterations=iters,
        restarts_used=restarts,
        history=tuple(history),
    )
