"""Parameter scalings and finite-sample diagnostics for KNN spectral clustering.

The consistency argument for separated clusters needs three things to hold
on a sample: every cluster's KNN graph is connected, no KNN edge joins two
clusters, and (for the anchor method) every point lies closer to an anchor
of its own cluster than the separation. The functions here measure each of
these on concrete data, and give the suggested ``K ~ C log(sample size)``
together with the ball radius it corresponds to.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InputError
from .geometry import PointSet, nearest_anchors
from .graph import build_knn_affinity, connected_components


@dataclass(frozen=True)
class ScalingConfig:
    """Constants of the scaling rules. ``C`` is not known constructively;
    the default of 2 is an empirical choice."""

    C: float = 2.0
    q_min: float = 1.0
    d: int = 2
    q_max: Optional[float] = None

    def __post_init__(self):
        if not (self.C > 0 and self.q_min > 0 and self.d >= 1):
            raise InputError("C, q_min and d must be positive")

    @property
    def omega_d(self):
        return unit_ball_volume(self.d)


def unit_ball_volume(d):
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


def bounding_box_density(points):
    """Density of the uniform law on the data's bounding box (default ``q_min``)."""
    X = points.points if isinstance(points, PointSet) else np.asarray(points)
    extent = X.max(axis=0) - X.min(axis=0)
    volume = float(np.prod(extent[extent > 0])) if np.any(extent > 0) else 1.0
    return 1.0 / volume


def chernoff_H(x):
    """``1 - x + x log x`` with ``H(0) = 1``."""
    if x < 0:
        raise InputError(f"H is defined for x >= 0, got {x}")
    if x == 0:
        return 1.0
    return 1.0 - x + x * math.log(x)


def recommended_K(sample_size, cfg=None):
    """``ceil(C ln(sample_size))`` clamped to ``[1, sample_size - 1]``."""
    cfg = cfg or ScalingConfig()
    if sample_size < 2:
        raise InputError("sample size must be at least 2")
    K = max(1, math.ceil(cfg.C * math.log(sample_size)))
    return min(K, sample_size - 1)


def bandwidth_from_K(K, sample_size, cfg=None):
    """Radius ``r`` with ``(sample_size / 2) * q_min * omega_d * r**d == K``."""
    cfg = cfg or ScalingConfig()
    if K < 1 or sample_size < 1:
        raise InputError("K and sample_size must be >= 1")
    return (2.0 * K / (sample_size * cfg.q_min * cfg.omega_d)) ** (1.0 / cfg.d)


def covering_radius(anchors, points):
    """Largest distance from a point to its nearest anchor."""
    A = anchors.points if isinstance(anchors, PointSet) else np.asarray(anchors, dtype=np.float64)
    X = points.points if isinstance(points, PointSet) else np.asarray(points, dtype=np.float64)
    if A.size == 0 or X.size == 0:
        raise InputError("covering radius needs non-empty anchors and points")
    _, dist = nearest_anchors(A, X)
    return float(dist.max())


def _require_labels(points):
    if not points.has_labels:
        raise InputError("this diagnostic needs ground-truth labels")


def per_cluster_connectivity(points, K):
    """Number of connected components of the KNN graph built on each label's points.

    Returns ``{label: count}``. A cluster with at most ``K`` points uses
    ``K = size - 1`` (its complete graph); a singleton counts as one component.
    """
    _require_labels(points)
    out = {}
    for lab in np.unique(points.labels):
        idx = np.flatnonzero(points.labels == lab)
        if idx.size == 1:
            out[int(lab)] = 1
            continue
        sub = points.subset(idx)
        W = build_knn_affinity(sub, min(K, idx.size - 1))
        out[int(lab)] = connected_components(W).k
    return out


def cross_cluster_edge_count(points, K, W=None):
    """Number of KNN-graph edges whose endpoints carry different labels."""
    _require_labels(points)
    if W is None:
        W = build_knn_affinity(points, K)
    e = W.edges()
    return int(np.count_nonzero(points.labels[e[:, 0]] != points.labels[e[:, 1]]))


def anchor_diagnostics(points, anchor_idx, K, delta=None):
    """All checks for one anchor sample, as a dict.

    ``recovers`` is true when the covering radius is below the separation,
    the anchor KNN graph has no cross-cluster edge and each cluster's anchors
    form one component: the situation in which AnchorNN returns the ground
    truth exactly.
    """
    from .synth import verify_separation

    _require_labels(points)
    anchors = points.subset(anchor_idx)
    if delta is None:
        delta = verify_separation(points)
    radius = covering_radius(anchors, points)
    cross = cross_cluster_edge_count(anchors, K)
    comps = per_cluster_connectivity(anchors, K)
    missing = sorted(set(np.unique(points.labels).tolist()) - set(comps))
    return {
        "delta": delta,
        "covering_radius": radius,
        "cross_cluster_edges": cross,
        "components": comps,
        "missing_labels": missing,
        "recovers": bool(radius < delta and cross == 0 and not missing and all(c == 1 for c in comps.values())),
    }
