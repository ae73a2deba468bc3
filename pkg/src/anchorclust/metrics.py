"""Rand Index and Adjusted Rand Index from the contingency table.

Pair counts are accumulated in Python integers (arbitrary precision) and
combined with ``fractions.Fraction``; only the final ratio is rounded to a
float.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InputError
from .partition import Partition


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    counts: np.ndarray  # r x s, counts[i, j] = |C_i & C'_j|
    row_sums: np.ndarray
    col_sums: np.ndarray
    total: int


def _labels(p):
    return p.labels if isinstance(p, Partition) else np.asarray(p)


def contingency(p1, p2):
    a = _labels(p1).ravel()
    b = _labels(p2).ravel()
    if a.size != b.size:
        raise InputError(f"partitions have different lengths ({a.size} vs {b.size})")
    if a.size == 0:
        raise InputError("partitions are empty")
    _, ia = np.unique(a, return_inverse=True)
    _, ib = np.unique(b, return_inverse=True)
    ia, ib = ia.ravel(), ib.ravel()
    r, s = ia.max() + 1, ib.max() + 1
    counts = np.bincount(ia * s + ib, minlength=r * s).reshape(r, s).astype(np.int64)
    return ContingencyTable(counts, counts.sum(axis=1), counts.sum(axis=0), int(a.size))


def _pairs(x):
    x = int(x)
    return x * (x - 1) // 2


def _pair_sums(table):
    same_both = sum(_pairs(c) for c in table.counts.ravel() if c > 1)
    same_1 = sum(_pairs(c) for c in table.row_sums)
    same_2 = sum(_pairs(c) for c in table.col_sums)
    return same_both, same_1, same_2, _pairs(table.total)


def rand_index_exact(p1, p2):
    table = contingency(p1, p2)
    if table.total < 2:
        raise InputError("Rand index needs at least two points")
    both, s1, s2, total = _pair_sums(table)
    # agreeing = together in both + apart in both
    agree = both + (total - s1 - s2 + both)
    return Fraction(agree, total)


def rand_index(p1, p2):
    return float(rand_index_exact(p1, p2))


def adjusted_rand_index_exact(p1, p2):
    """ARI as a ``Fraction``.

    When the chance-corrected denominator vanishes (both partitions are a
    single block, or both are all singletons) the result is 1 for
    identical set systems and 0 otherwise.
    """
    table = contingency(p1, p2)
    if table.total < 2:
        raise InputError("adjusted Rand index needs at least two points")
    both, s1, s2, total = _pair_sums(table)
    expected = Fraction(s1 * s2, total)
    maximum = Fraction(s1 + s2, 2)
    if maximum == expected:
        identical = (table.counts > 0).sum() == table.counts.shape[0] == table.counts.shape[1]
        return Fraction(1) if identical else Fraction(0)
    return (both - expected) / (maximum - expected)


def adjusted_rand_index(p1, p2):
    return float(adjusted_rand_index_exact(p1, p2))
