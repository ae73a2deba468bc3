"""Synthetic 2-D datasets with separated ground-truth clusters.

Six families are available:

``two_spirals``
    Two interleaved Archimedean arms, the second rotated by pi. Points are
    spread evenly in arc length; radial noise is uniform in
    ``[-noise, noise]``.
``cluster_in_cluster``
    A uniform inner disc surrounded by ``arms`` short radial dashes at
    equally spaced angles. Each dash is a small subcluster, so the outer
    cluster has a fine local scale (dashes) and a coarse one (the ring).
``corners``
    Four L-shaped clusters, one per corner of a square, each made of two
    perpendicular bars.
``half_kernel``
    Two nested half-annuli of equal width, sampled at one common density.
``crescent_full_moon``
    A disc and a crescent (half-annulus) wrapped around its lower side.
``outlier``
    Two dense blobs side by side and two sparse blobs far above and below.

Cluster sizes are deterministic: one point per cluster, then a
floor/remainder split of the rest over the configured shares. Within ``cluster_in_cluster`` the outer points are split
the same way over the dashes. Every support is separated from the others by
construction; ``generate`` additionally enforces ``delta_min`` by
rejection.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from .errors import InputError
from .geometry import PointSet
from .rng import stream

DEFAULTS = {
    "two_spirals": dict(spacing=1.0, turns=0.6, noise=0.1, delta_min=0.5),
    "cluster_in_cluster": dict(
        inner_radius=1.0, ring_radius=2.4, dash_length=0.1, arms=100,
        tangential_noise=0.005, inner_share=0.5, delta_min=1.0,
    ),
    "corners": dict(half_width=1.0, bar_length=0.7, bar_width=0.15, delta_min=0.4),
    "half_kernel": dict(inner_radius=1.0, outer_radius=2.5, band_width=0.5, delta_min=0.8),
    "crescent_full_moon": dict(moon_radius=1.0, crescent_inner=2.0, crescent_outer=3.0, delta_min=0.8),
    "outlier": dict(
        lateral_offset=3.0, dense_radius=1.0, sparse_offset=6.0, sparse_radius=1.5,
        sparse_share=0.125, delta_min=2.0,
    ),
}
CLUSTER_COUNTS = {
    "two_spirals": 2,
    "cluster_in_cluster": 2,
    "corners": 4,
    "half_kernel": 2,
    "crescent_full_moon": 2,
    "outlier": 4,
}
FAMILIES = tuple(DEFAULTS)


@dataclass(frozen=True)
class SynthSpec:
    family: str
    n: int
    seed: int = 0
    params: dict = field(default_factory=dict)
    delta_min: float = None  # None: the family default

    def resolved(self):
        """Family defaults overlaid with ``params``; includes ``delta_min``."""
        if self.family not in DEFAULTS:
            raise InputError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        out = dict(DEFAULTS[self.family])
        unknown = set(self.params) - set(out)
        if unknown:
            raise InputError(f"unknown parameters for {self.family}: {sorted(unknown)}")
        out.update(self.params)
        if self.delta_min is not None:
            out["delta_min"] = self.delta_min
        if out["delta_min"] < 0:
            raise InputError("delta_min must be non-negative")
        return out

    @property
    def k(self):
        return CLUSTER_COUNTS[self.family]


def split_counts(n, shares, at_least_one=False):
    """Deterministic split of ``n`` by ``shares``: floors, then the remainder
    one at a time to the clusters with the largest fractional parts
    (earlier clusters first on ties).

    With ``at_least_one`` (and ``n >= len(shares)``) every part first gets
    one item and the rest is split as above.
    """
    shares = np.asarray(shares, dtype=np.float64)
    if at_least_one and n >= shares.size:
        return 1 + split_counts(n - shares.size, shares)
    raw = n * shares / shares.sum()
    counts = np.floor(raw).astype(np.int64)
    frac = raw - counts
    order = np.lexsort((np.arange(frac.size), -frac))
    counts[order[: n - counts.sum()]] += 1
    return counts


def _uniform_disc(rng, count, radius, center=(0.0, 0.0)):
    r = radius * np.sqrt(rng.random(count))
    t = rng.uniform(0.0, 2 * np.pi, count)
    return np.column_stack([center[0] + r * np.cos(t), center[1] + r * np.sin(t)])


def _annulus_sector(rng, count, r_in, r_out, t0, t1):
    r = np.sqrt(rng.uniform(r_in ** 2, r_out ** 2, count))
    t = rng.uniform(t0, t1, count)
    return np.column_stack([r * np.cos(t), r * np.sin(t)])


# Each sampler maps (rng, count, params) -> points of one cluster. The
# samplers of a family are listed in label order.

def _spiral_arm(offset):
    def sample(rng, count, p):
        a = p["spacing"] / np.pi
        t0 = np.pi / 2
        t1 = t0 + 2 * np.pi * p["turns"]
        # uniform in theta^2 is uniform in arc length for r = a * theta (up to the a*dtheta term)
        theta = np.sqrt(rng.uniform(t0 ** 2, t1 ** 2, count))
        r = a * theta + rng.uniform(-p["noise"], p["noise"], count)
        ang = theta + offset
        return np.column_stack([r * np.cos(ang), r * np.sin(ang)])
    return sample


def _cic_inner(rng, count, p):
    return _uniform_disc(rng, count, p["inner_radius"])


def _cic_outer(rng, count, p, arm=None):
    arms = int(p["arms"])
    if arm is None:
        arm = np.repeat(np.arange(arms), split_counts(count, np.ones(arms)))
    ang = 2 * np.pi * arm / arms
    r = p["ring_radius"] + p["dash_length"] * rng.random(count)
    tang = p["tangential_noise"] * rng.uniform(-1.0, 1.0, count)
    c, s = np.cos(ang), np.sin(ang)
    return np.column_stack([r * c - tang * s, r * s + tang * c])


def _corner(sx, sy):
    def sample(rng, count, p):
        h, ell, w = p["half_width"], p["bar_length"], p["bar_width"]
        # L with its corner at (h, h); bars chosen in proportion to their area
        area_h = ell * w
        area_v = (ell - w) * w
        n_h = int(rng.binomial(count, area_h / (area_h + area_v))) if count else 0
        n_v = count - n_h
        horiz = np.column_stack([rng.uniform(h - ell, h, n_h), rng.uniform(h - w, h, n_h)])
        vert = np.column_stack([rng.uniform(h - w, h, n_v), rng.uniform(h - ell, h - w, n_v)])
        return np.vstack([horiz, vert]) * np.array([sx, sy])
    return sample


def _half_band(which):
    def sample(rng, count, p):
        r0 = p["inner_radius"] if which == 0 else p["outer_radius"]
        return _annulus_sector(rng, count, r0, r0 + p["band_width"], 0.0, np.pi)
    return sample


def _moon(rng, count, p):
    return _uniform_disc(rng, count, p["moon_radius"])


def _crescent(rng, count, p):
    return _annulus_sector(rng, count, p["crescent_inner"], p["crescent_outer"], np.pi, 2 * np.pi)


def _blob(kind, sign):
    def sample(rng, count, p):
        if kind == "dense":
            return _uniform_disc(rng, count, p["dense_radius"], (sign * p["lateral_offset"], 0.0))
        return _uniform_disc(rng, count, p["sparse_radius"], (0.0, sign * p["sparse_offset"]))
    return sample


def _family(family, p):
    """(samplers, shares) for a family with resolved parameters ``p``."""
    if family == "two_spirals":
        return [_spiral_arm(0.0), _spiral_arm(np.pi)], [1, 1]
    if family == "cluster_in_cluster":
        s = p["inner_share"]
        return [_cic_inner, _cic_outer], [s, 1 - s]
    if family == "corners":
        return [_corner(sx, sy) for sx, sy in ((1, 1), (-1, 1), (-1, -1), (1, -1))], [1, 1, 1, 1]
    if family == "half_kernel":
        # shares proportional to band area: one density for both bands
        w = p["band_width"]
        areas = [(r + w) ** 2 - r ** 2 for r in (p["inner_radius"], p["outer_radius"])]
        return [_half_band(0), _half_band(1)], areas
    if family == "crescent_full_moon":
        return [_moon, _crescent], [1, 1]
    if family == "outlier":
        sp_ = p["sparse_share"]
        dense = (1 - 2 * sp_) / 2
        return [_blob("dense", -1), _blob("dense", 1), _blob("sparse", 1), _blob("sparse", -1)], [dense, dense, sp_, sp_]
    raise InputError(f"unknown family {family!r}")


def _too_close(points, labels, delta):
    """Mask of points with a differently labeled point closer than ``delta``."""
    bad = np.zeros(labels.size, dtype=bool)
    if delta <= 0:
        return bad
    for lab in np.unique(labels):
        mine = labels == lab
        other = ~mine
        if not other.any():
            continue
        d, _ = cKDTree(points[other]).query(points[mine], k=1)
        bad[np.flatnonzero(mine)[d < delta]] = True
    return bad


def generate(spec):
    """Sample a labeled PointSet for ``spec``.

    Points violating ``delta_min`` against another cluster are redrawn from
    their own cluster; after ``100 * n`` redraws the spec is declared
    infeasible.
    """
    p = spec.resolved()
    k = spec.k
    if spec.n < k:
        raise InputError(f"{spec.family} needs n >= {k}, got {spec.n}")
    rng = stream(spec.seed, "synth")
    samplers, shares = _family(spec.family, p)
    counts = split_counts(spec.n, shares, at_least_one=True)
    points = np.vstack([sampler(rng, int(c), p) for sampler, c in zip(samplers, counts)])
    labels = np.repeat(np.arange(k), counts)

    budget = 100 * spec.n
    bad = _too_close(points, labels, p["delta_min"])
    while bad.any():
        budget -= int(bad.sum())
        if budget < 0:
            raise InputError(
                f"cannot realize delta_min={p['delta_min']} for {spec.family}; "
                "the clusters are too close for that separation"
            )
        for lab in np.unique(labels[bad]):
            idx = np.flatnonzero(bad & (labels == lab))
            if samplers[lab] is _cic_outer:
                # redraw on the same dash so per-dash counts stay fixed
                start = np.flatnonzero(labels == lab)[0]
                arm = np.repeat(np.arange(int(p["arms"])), split_counts(int(counts[lab]), np.ones(int(p["arms"]))))
                points[idx] = _cic_outer(rng, idx.size, p, arm=arm[idx - start])
            else:
                points[idx] = samplers[lab](rng, idx.size, p)
        bad = _too_close(points, labels, p["delta_min"])
    return PointSet(points, labels)


def verify_separation(points):
    """Smallest distance between two points with different labels (brute force)."""
    if not points.has_labels:
        raise InputError("separation needs ground-truth labels")
    labels = points.labels
    if np.unique(labels).size < 2:
        raise InputError("separation needs at least two labels")
    best = np.inf
    X = points.points
    for lab in np.unique(labels):
        mine = labels == lab
        rest = labels > lab
        if not rest.any():
            continue
        A, B = X[mine], X[rest]
        step = max(1, (1 << 22) // max(1, B.shape[0]))
        for s in range(0, A.shape[0], step):
            best = min(best, float(cdist(A[s:s + step], B).min()))
    return best
