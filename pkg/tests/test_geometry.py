import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from anchorclust.errors import InputError
from anchorclust.geometry import (
    PointSet,
    euclidean_distance,
    knn,
    knn_all,
    nearest_anchor,
    nearest_anchors,
)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def line(*xs):
    return PointSet(np.array(xs, dtype=float)[:, None])


def test_distance_examples():
    assert euclidean_distance((0, 0), (0, 0)) == 0
    assert euclidean_distance((0, 0), (3, 4)) == 5
    assert euclidean_distance((1, 1, 1), (2, 2, 2)) == pytest.approx(math.sqrt(3), abs=1e-12)
    with pytest.raises(InputError):
        euclidean_distance((0, 0), (1, 1, 1))


def test_knn_examples():
    nl = knn(line(0, 1, 3), 2, 1)
    assert nl.indices.tolist() == [1] and nl.distances.tolist() == [2.0]
    # tie at distance 1: smaller index wins
    assert knn(line(0, 1, 2), 1, 1).indices.tolist() == [0]


def test_knn_all_neighbors_when_K_is_n_minus_1():
    P = line(5, 0, 2, 9)
    nl = knn(P, 0, 3)
    assert sorted(nl.indices.tolist()) == [1, 2, 3]
    assert nl.owner == 0 and nl.K == 3
    assert np.all(np.diff(nl.distances) >= 0)


def test_knn_bad_K():
    P = line(0, 1, 2)
    for K in (0, 3):
        with pytest.raises(InputError):
            knn(P, 0, K)
        with pytest.raises(InputError):
            knn_all(P, K)


def test_nearest_anchor_examples():
    A = PointSet(np.array([[0.0, 0.0], [10.0, 10.0]]))
    i, d = nearest_anchor(A, (1, 1))
    assert i == 0 and d == pytest.approx(math.sqrt(2))
    assert nearest_anchor(A, (10, 10)) == (1, 0.0)
    assert nearest_anchor(line(0, 2), (1,))[0] == 0


def test_pointset_validation():
    with pytest.raises(InputError):
        PointSet(np.array([[0.0, np.nan]]))
    with pytest.raises(InputError):
        PointSet(np.zeros((0, 2)))
    with pytest.raises(InputError):
        PointSet(np.zeros((3, 2)), labels=[0, 1])
    with pytest.raises(InputError):
        PointSet(np.zeros((2, 2)), labels=[0, -1])
    P = PointSet([[1.0, 2.0], [3.0, 4.0]], labels=[1, 0])
    assert (P.n, P.d) == (2, 2)
    with pytest.raises(ValueError):
        P.points[0, 0] = 7.0
    assert P.subset([1]).labels.tolist() == [0]


@st.composite
def point_sets(draw, max_n=50, grid=False):
    n = draw(st.integers(2, max_n))
    d = draw(st.integers(1, 3))
    elems = st.integers(-3, 3).map(float) if grid else finite
    X = draw(arrays(np.float64, (n, d), elements=elems))
    return X


@given(point_sets(), st.data())
def test_knn_matches_full_sort(X, data):
    K = data.draw(st.integers(1, X.shape[0] - 1))
    idx, d2 = knn_all(PointSet(X), K)
    for q in range(X.shape[0]):
        assert idx[q].tolist() == oracles.knn_row(X, q, K)
        assert q not in idx[q]
        assert np.all(np.diff(d2[q]) >= 0)


@given(point_sets(grid=True), st.data())
def test_knn_ties_follow_index_order(X, data):
    # integer grid coordinates create many exact ties
    K = data.draw(st.integers(1, X.shape[0] - 1))
    q = data.draw(st.integers(0, X.shape[0] - 1))
    assert knn(PointSet(X), q, K).indices.tolist() == oracles.knn_row(X, q, K)


@given(point_sets(grid=True), point_sets(grid=True))
def test_nearest_anchors_first_minimum(A, Q):
    if A.shape[1] != Q.shape[1]:
        Q = np.zeros((Q.shape[0], A.shape[1]))
    idx, dist = nearest_anchors(A, Q)
    for i, q in enumerate(Q):
        d2 = ((A - q) ** 2).sum(axis=1)
        assert idx[i] == int(np.flatnonzero(d2 == d2.min())[0])
        assert dist[i] == pytest.approx(math.sqrt(d2.min()))


@given(arrays(np.float64, (3, 2), elements=finite))
def test_metric_axioms(X):
    a, b, c = X
    assert euclidean_distance(a, b) == euclidean_distance(b, a)
    assert euclidean_distance(a, c) <= euclidean_distance(a, b) + euclidean_distance(b, c) + 1e-12 * (1 + np.abs(X).max())
