"""Full spectral clustering and AnchorNN (spectral clustering on a random
anchor subset followed by nearest-anchor label propagation)."""

import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .eigen import smallest_eigenpairs
from .errors import InputError
from .geometry import PointSet, nearest_anchors
from .graph import build_knn_affinity, build_laplacian, laplacian_kind
from .kmeans import kmeans
from .partition import Partition
from .rng import stream

PHASES = ("sample", "affinity", "eigen", "kmeans", "propagate")


@dataclass(frozen=True)
class ClusterConfig:
    k: int
    K: int
    m: Optional[int] = None
    laplacian_kind: str = "unnormalized"
    seed: int = 0
    eigen_tol: float = 1e-8
    eigen_max_iter: Optional[int] = None
    eigen_method: str = "auto"
    kmeans_restarts: int = 10
    kmeans_max_iter: int = 300

    def __post_init__(self):
        object.__setattr__(self, "laplacian_kind", laplacian_kind(self.laplacian_kind))
        if self.k < 1:
            raise InputError(f"k must be >= 1, got {self.k}")
        if self.K < 1:
            raise InputError(f"K must be >= 1, got {self.K}")
        if self.m is not None and self.m < 1:
            raise InputError(f"m must be >= 1, got {self.m}")
        if self.seed < 0:
            raise InputError("seed must be non-negative")

    def validate(self, n, anchored=False):
        size = self.m if anchored else n
        if anchored:
            if self.m is None:
                raise InputError("AnchorNN needs the anchor count m")
            if self.m > n:
                raise InputError(f"m={self.m} exceeds n={n}")
        if self.K > size - 1:
            raise InputError(f"K={self.K} must be at most {size - 1} for a sample of {size} points")
        if self.k > size:
            raise InputError(f"k={self.k} exceeds the sample size {size}")


@contextmanager
def _phase(timings, name):
    start = time.perf_counter()
    try:
        yield
    finally:
        if timings is not None:
            timings[name] = timings.get(name, 0.0) + time.perf_counter() - start


def spectral_cluster(points, cfg, timings=None, embedding_out=None):
    """Partition ``points`` into ``cfg.k`` clusters by full spectral clustering.

    KNN affinity, Laplacian, the ``k`` lowest eigenvectors, then k-means on
    the rows of the eigenvector matrix. Rows are not renormalized.

    ``timings`` (a dict) accumulates wall time per phase;
    ``embedding_out`` (a list) receives the SpectralEmbedding.
    """
    cfg.validate(points.n)
    with _phase(timings, "affinity"):
        W = build_knn_affinity(points, cfg.K)
        L = build_laplacian(W, cfg.laplacian_kind)
    with _phase(timings, "eigen"):
        emb = smallest_eigenpairs(
            L, cfg.k, tol=cfg.eigen_tol, max_iter=cfg.eigen_max_iter,
            seed=cfg.seed, method=cfg.eigen_method,
        )
    if embedding_out is not None:
        embedding_out.append(emb)
    with _phase(timings, "kmeans"):
        result = kmeans(emb.vectors, cfg.k, seed=cfg.seed,
                        restarts=cfg.kmeans_restarts, max_iter=cfg.kmeans_max_iter)
    return result.assignment


def sample_anchors(n, m, seed):
    """Sorted indices of ``m`` distinct points drawn uniformly from ``range(n)``.

    The draw is the first ``m`` entries of one seeded permutation, so for a
    fixed seed smaller anchor sets are subsets of larger ones.
    """
    if not 1 <= m <= n:
        raise InputError(f"anchor count must satisfy 1 <= m <= n (n={n}), got {m}")
    perm = stream(seed, "anchors").permutation(n)
    return np.sort(perm[:m])


def anchornn_cluster(points, cfg, timings=None):
    """AnchorNN clustering. Returns ``(partition, anchor_indices)``.

    Anchors keep the labels of the anchor-level spectral clustering; every
    other point takes the label of its nearest anchor.
    """
    cfg.validate(points.n, anchored=True)
    with _phase(timings, "sample"):
        anchors = sample_anchors(points.n, cfg.m, cfg.seed)
        anchor_set = PointSet(points.points[anchors])
    anchor_part = spectral_cluster(anchor_set, cfg, timings=timings)
    with _phase(timings, "propagate"):
        labels = np.empty(points.n, dtype=np.int64)
        labels[anchors] = anchor_part.labels
        rest = np.ones(points.n, dtype=bool)
        rest[anchors] = False
        if rest.any():
            nearest, _ = nearest_anchors(anchor_set.points, points.points[rest])
            labels[rest] = anchor_part.labels[nearest]
        part = Partition.from_labels(labels, cfg.k)
    return part, anchors
