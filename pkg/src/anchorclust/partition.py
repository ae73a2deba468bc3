from dataclasses import dataclass

import numpy as np

from .errors import InputError


def canonical_labels(labels):
    """Relabel so clusters are numbered 0, 1, ... in order of first member."""
    labels = np.asarray(labels)
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(first.size, dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(first.size)
    return rank[inverse.ravel()]


@dataclass(frozen=True, eq=False)
class Partition:
    """Assignment of ``n`` items to cluster labels in ``[0, k)``.

    ``degenerate`` is set when fewer than ``k`` clusters are nonempty.
    """

    labels: np.ndarray
    k: int
    degenerate: bool = False

    def __post_init__(self):
        lab = np.asarray(self.labels, dtype=np.int64)
        if lab.ndim != 1:
            raise InputError("partition labels must be one-dimensional")
        if lab.size and (lab.min() < 0 or lab.max() >= self.k):
            raise InputError(f"labels must lie in [0, {self.k})")
        lab.setflags(write=False)
        object.__setattr__(self, "labels", lab)

    @classmethod
    def from_labels(cls, labels, k=None):
        """Canonicalized partition; ``k`` defaults to the number of distinct labels."""
        lab = canonical_labels(labels)
        used = int(lab.max()) + 1 if lab.size else 0
        k = used if k is None else int(k)
        return cls(lab, k, degenerate=used < k)

    @property
    def n(self):
        return self.labels.size

    def sizes(self):
        return np.bincount(self.labels, minlength=self.k)

    def same_as(self, other):
        """True when both describe the same set system (labels may differ)."""
        return self.n == other.n and np.array_equal(
            canonical_labels(self.labels), canonical_labels(other.labels)
        )
