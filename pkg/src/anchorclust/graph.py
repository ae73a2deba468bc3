"""KNN affinity graphs, graph Laplacians and connected components."""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components as _scipy_components

from .errors import InputError
from .geometry import knn_all
from .partition import Partition, canonical_labels

KINDS = ("unnormalized", "random_walk", "symmetric")
_ALIASES = {
    "unnorm": "unnormalized",
    "unnormalized": "unnormalized",
    "rw": "random_walk",
    "random_walk": "random_walk",
    "sym": "symmetric",
    "symmetric": "symmetric",
}


def laplacian_kind(name):
    """Resolve a Laplacian kind or one of its short aliases (unnorm, rw, sym)."""
    try:
        return _ALIASES[name]
    except KeyError:
        raise InputError(f"unknown Laplacian kind {name!r}; expected one of {sorted(_ALIASES)}") from None


@dataclass(frozen=True, eq=False)
class SparseAffinity:
    """Structure of a symmetric 0/1 adjacency matrix in compressed-row form.

    Row ``i`` holds the neighbors ``indices[indptr[i]:indptr[i+1]]`` in
    strictly increasing order. There is no diagonal and every edge is
    stored in both directions.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray

    @classmethod
    def from_edges(cls, n, edges):
        """Build from an iterable of undirected ``(i, j)`` pairs; self-loops are dropped."""
        e = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise InputError(f"edge endpoint out of range for n={n}")
        return cls._from_directed(n, e[:, 0], e[:, 1])

    @classmethod
    def _from_directed(cls, n, rows, cols):
        keep = rows != cols
        rows, cols = rows[keep], cols[keep]
        r = np.concatenate([rows, cols])
        c = np.concatenate([cols, rows])
        m = sp.csr_matrix((np.ones(r.size, dtype=np.int8), (r, c)), shape=(n, n))
        m.sum_duplicates()
        m.sort_indices()
        return cls(n, m.indptr.astype(np.int64), m.indices.astype(np.int64))

    @property
    def n_edges(self):
        return self.indices.size // 2

    def neighbors(self, i):
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def edges(self):
        """Undirected edges as an ``(E, 2)`` array with ``i < j``, sorted."""
        rows = np.repeat(np.arange(self.n), np.diff(self.indptr))
        upper = rows < self.indices
        return np.column_stack([rows[upper], self.indices[upper]])

    def to_csr(self, dtype=np.float64):
        data = np.ones(self.indices.size, dtype=dtype)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))


def build_knn_affinity(points, K):
    """OR-symmetrized KNN graph: ``i ~ j`` iff either is among the other's K nearest."""
    idx, _ = knn_all(points, K)
    n = points.n
    rows = np.repeat(np.arange(n, dtype=np.int64), K)
    return SparseAffinity._from_directed(n, rows, idx.ravel())


def degrees(W):
    return np.diff(W.indptr).astype(np.int64)


@dataclass(frozen=True, eq=False)
class Laplacian:
    kind: str
    matrix: sp.csr_matrix
    degrees: np.ndarray

    @property
    def n(self):
        return self.matrix.shape[0]


def build_laplacian(W, kind="unnormalized"):
    """Unnormalized ``D - W``, random-walk ``I - D^-1 W`` or symmetric ``I - D^-1/2 W D^-1/2``.

    For normalized kinds an isolated vertex gets a zero row (its inverse
    degree is taken as 0), so it shows up as one more zero eigenvalue.
    """
    kind = laplacian_kind(kind)
    deg = degrees(W)
    A = W.to_csr()
    n = W.n
    if kind == "unnormalized":
        L = sp.diags(deg.astype(np.float64)) - A
    else:
        connected = deg > 0
        ident = sp.diags(connected.astype(np.float64))
        with np.errstate(divide="ignore"):
            if kind == "random_walk":
                inv = np.where(connected, 1.0 / deg, 0.0)
                L = ident - sp.diags(inv) @ A
            else:
                inv_sqrt = np.where(connected, 1.0 / np.sqrt(deg), 0.0)
                S = sp.diags(inv_sqrt)
                L = ident - S @ A @ S
    L = sp.csr_matrix(L, shape=(n, n))
    L.sort_indices()
    return Laplacian(kind, L, deg)


def connected_components(W):
    """Component labels numbered in order of each component's smallest vertex."""
    if W.n == 0:
        return Partition(np.empty(0, dtype=np.int64), 0)
    _, labels = _scipy_components(W.to_csr(np.int8), directed=False)
    lab = canonical_labels(labels)
    return Partition(lab, int(lab.max()) + 1)
