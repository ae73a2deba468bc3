"""Slow, obviously-correct reference implementations used by the tests."""

import itertools
from fractions import Fraction

import numpy as np


def pair_counts(a, b):
    """(a_same & b_same, a_same, b_same, pairs) by enumerating every pair."""
    both = sa = sb = total = 0
    for i, j in itertools.combinations(range(len(a)), 2):
        x, y = a[i] == a[j], b[i] == b[j]
        both += x and y
        sa += x
        sb += y
        total += 1
    return both, sa, sb, total


def rand_index(a, b):
    agree = 0
    total = 0
    for i, j in itertools.combinations(range(len(a)), 2):
        agree += (a[i] == a[j]) == (b[i] == b[j])
        total += 1
    return Fraction(agree, total)


def adjusted_rand_index(a, b):
    both, sa, sb, total = pair_counts(a, b)
    expected = Fraction(sa * sb, total)
    maximum = Fraction(sa + sb, 2)
    if maximum == expected:
        return None
    return (both - expected) / (maximum - expected)


def knn_row(X, q, K):
    """Indices of the K nearest points to X[q], ordered by (distance, index)."""
    cand = []
    for j in range(len(X)):
        if j != q:
            cand.append((float(np.sum((X[q] - X[j]) ** 2)), j))
    cand.sort()
    return [j for _, j in cand[:K]]


def knn_edges(X, K):
    edges = set()
    for i in range(len(X)):
        for j in knn_row(X, i, K):
            edges.add((min(i, j), max(i, j)))
    return edges


def components(n, edges):
    """Union-find components, labelled by order of smallest vertex."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    roots = [find(i) for i in range(n)]
    order = {}
    return [order.setdefault(r, len(order)) for r in roots]


def kmeans_optimum(rows, k):
    """Smallest inertia over every assignment of rows to at most k groups."""
    n = rows.shape[0]
    best = np.inf
    for assign in itertools.product(range(k), repeat=n):
        if assign[0] != 0:
            continue  # fix the label of row 0 to prune symmetric copies
        a = np.array(assign)
        cost = 0.0
        for j in range(k):
            pts = rows[a == j]
            if len(pts):
                cost += float(((pts - pts.mean(axis=0)) ** 2).sum())
        best = min(best, cost)
    return best


def subspace_angle(U, V):
    """Largest principal angle between the column spans of U and V."""
    Qu, _ = np.linalg.qr(U)
    Qv, _ = np.linalg.qr(V)
    s = np.linalg.svd(Qu.T @ Qv, compute_uv=False)
    return float(np.arccos(np.clip(s.min(), -1.0, 1.0)))


def random_graph_edges(rng, n, mean_degree=None):
    """Sparse Erdos-Renyi edge list; low degree gives several components."""
    if mean_degree is None:
        mean_degree = rng.uniform(0.5, 4.0)
    p = min(1.0, mean_degree / max(1, n - 1))
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < p
    return list(zip(iu[keep].tolist(), ju[keep].tolist()))


def containment_angle(V, U):
    """Largest principal angle from span(V) into span(U) (dim V <= dim U)."""
    Qv, _ = np.linalg.qr(V)
    Qu, _ = np.linalg.qr(U)
    s = np.linalg.svd(Qv.T @ Qu, compute_uv=False)
    return float(np.arccos(np.clip(s.min(), -1.0, 1.0)))


def eigen_agreement(vals, vecs, ref_vals, ref_vecs, cluster_tol=1e-6):
    """(max eigenvalue error, max eigenspace angle) of the k computed pairs.

    Each computed vector is compared with the reference eigenspace of its
    eigenvalue cluster, widened to the whole cluster at the cut-off so a
    degenerate k-th eigenvalue does not make the comparison ill-posed.
    """
    k = vals.size
    err = float(np.max(np.abs(vals - ref_vals[:k])))
    worst = 0.0
    start = 0
    while start < k:
        stop = start + 1
        while stop < k and ref_vals[stop] - ref_vals[stop - 1] <= cluster_tol:
            stop += 1
        wide = stop
        while wide < ref_vals.size and ref_vals[wide] - ref_vals[wide - 1] <= cluster_tol:
            wide += 1
        worst = max(worst, containment_angle(vecs[:, start:stop], ref_vecs[:, start:wide]))
        start = stop
    return err, worst
