"""Smallest eigenpairs of symmetric (sparse) Laplacians.

Two routes are provided:

* a block Lanczos iteration with full reorthogonalization and thick
  restarts, used for large sparse matrices;
* a dense LAPACK solve for small matrices.

``dense_reference_eigen`` is a separate cyclic Jacobi solver meant only as
a test oracle; it shares no code with the two routes above.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .errors import ConvergenceError, InputError
from .graph import Laplacian
from .rng import stream

DENSE_LIMIT = 512


@dataclass(frozen=True, eq=False)
class SpectralEmbedding:
    """``k`` eigenpairs in ascending order; row ``i`` of ``vectors`` embeds point ``i``."""

    eigenvalues: np.ndarray
    vectors: np.ndarray
    residual_norms: np.ndarray
    matvecs: int = 0
    method: str = ""

    @property
    def k(self):
        return self.eigenvalues.size


def canonicalize_signs(vectors, threshold=1e-10):
    """Flip columns so the first entry with magnitude above ``threshold`` is positive."""
    V = np.array(vectors, dtype=np.float64, copy=True)
    for j in range(V.shape[1]):
        big = np.flatnonzero(np.abs(V[:, j]) > threshold)
        if big.size and V[big[0], j] < 0:
            V[:, j] = -V[:, j]
    return V


def _as_operator(L):
    if isinstance(L, Laplacian):
        return L.matrix
    if sp.issparse(L):
        return sp.csr_matrix(L)
    M = np.asarray(L, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InputError(f"expected a square matrix, got shape {M.shape}")
    return M


def _orthonormal_block(Z, Q, p, rng, scale):
    """Orthonormal basis (at most ``p`` columns) of ``Z`` projected off ``Q``.

    Directions lost to rank deficiency are refilled with random vectors so
    the block keeps ``p`` columns while the space allows it. This is what
    lets a single start block reach every copy of a repeated eigenvalue.
    """
    n = Z.shape[0]
    room = n - Q.shape[1]
    p = min(p, room)
    if p <= 0:
        return np.empty((n, 0))
    for _ in range(2):
        Z = Z - Q @ (Q.T @ Z)
    U, s, _ = np.linalg.svd(Z, full_matrices=False)
    good = s > 1e-10 * max(scale, 1.0)
    X = U[:, good][:, :p]
    while X.shape[1] < p:
        R = rng.standard_normal((n, p - X.shape[1]))
        for _ in range(2):
            R = R - Q @ (Q.T @ R)
            R = R - X @ (X.T @ R)
        U, s, _ = np.linalg.svd(R, full_matrices=False)
        X = np.hstack([X, U[:, s > 1e-10 * s.max()]])[:, :p]
    return X


def _block_lanczos(A, k, tol, max_iter, rng, block_size=None, max_basis=None):
    n = A.shape[0]
    p = min(n, block_size or max(2, k))
    if max_basis is None:
        max_basis = max(2 * k + 6 * p, 60)
    max_basis = min(n, max(max_basis, k + p))
    keep_target = max(k + p, max_basis // 2)

    Q = np.empty((n, max_basis))
    AQ = np.empty((n, max_basis))
    H = np.zeros((max_basis, max_basis))
    b = 0
    matvecs = 0
    scale = 1.0

    X = _orthonormal_block(rng.standard_normal((n, p)), Q[:, :0], p, rng, scale)
    while True:
        AX = A @ X
        matvecs += X.shape[1]
        w = X.shape[1]
        Q[:, b:b + w] = X
        AQ[:, b:b + w] = AX
        col = Q[:, :b + w].T @ AX
        H[:b + w, b:b + w] = col
        H[b:b + w, :b + w] = col.T
        b += w

        theta, S = np.linalg.eigh(H[:b, :b])
        scale = max(scale, float(np.abs(theta).max()))
        nw = min(k, b)
        Sk = S[:, :nw]
        Y = Q[:, :b] @ Sk
        R = AQ[:, :b] @ Sk - Y * theta[:nw]
        res = np.linalg.norm(R, axis=0)
        if nw == k and np.all(res <= tol * np.maximum(1.0, np.abs(theta[:k]))):
            return theta[:k], Y, res, matvecs
        if b == n:
            # Krylov space is the whole space; Rayleigh-Ritz is exact up to rounding.
            return theta[:k], Y, res, matvecs
        if matvecs >= max_iter:
            worst = float(res.max())
            raise ConvergenceError(
                f"eigensolver did not converge in {matvecs} matrix-vector products "
                f"(worst residual {worst:.3e}, tol {tol:.1e})",
                worst_residual=worst,
            )

        if b + p > max_basis:
            keep = min(keep_target, b)
            Sk = S[:, :keep]
            Qk = Q[:, :b] @ Sk
            AQk = AQ[:, :b] @ Sk
            Z = AQk - Qk * theta[:keep]
            Q[:, :keep] = Qk
            AQ[:, :keep] = AQk
            H[:] = 0.0
            H[np.arange(keep), np.arange(keep)] = theta[:keep]
            b = keep
        else:
            Z = AX
        X = _orthonormal_block(Z, Q[:, :b], p, rng, scale)


def _dense_smallest(A, k):
    M = A.toarray() if sp.issparse(A) else np.asarray(A)
    M = 0.5 * (M + M.T)
    vals, vecs = sla.eigh(M, subset_by_index=[0, k - 1])
    return vals, vecs


def smallest_eigenpairs(L, k, tol=1e-8, max_iter=None, seed=0, method="auto", block_size=None):
    """The ``k`` smallest eigenpairs of a symmetric Laplacian or matrix.

    ``method`` is ``"auto"`` (dense LAPACK up to ``DENSE_LIMIT`` rows,
    block Lanczos above), ``"dense"`` or ``"lanczos"``. ``max_iter`` caps
    the number of matrix-vector products (default ``10 * n``).

    A random-walk Laplacian is solved through its symmetric similarity
    transform; the returned vectors are mapped back and scaled to unit
    length (they are then orthogonal in the degree inner product, not the
    Euclidean one).

    Raises ``ConvergenceError`` when the Lanczos route exhausts its budget.
    """
    kind = L.kind if isinstance(L, Laplacian) else None
    A = _as_operator(L)
    n = A.shape[0]
    if not 1 <= k <= n:
        raise InputError(f"k must satisfy 1 <= k <= n (n={n}), got {k}")
    if max_iter is None:
        max_iter = 10 * n
    if method not in ("auto", "dense", "lanczos"):
        raise InputError(f"unknown eigen method {method!r}")

    T = None
    if kind == "random_walk":
        deg = L.degrees.astype(np.float64)
        t = np.where(deg > 0, np.sqrt(deg), 1.0)
        T = t
        A = sp.diags(t) @ A @ sp.diags(1.0 / t)
        A = sp.csr_matrix(0.5 * (A + A.T))

    use_dense = method == "dense" or (method == "auto" and n <= DENSE_LIMIT)
    if use_dense:
        vals, vecs = _dense_smallest(A, k)
        matvecs = 0
        used = "dense"
    else:
        rng = stream(seed, "eigen")
        vals, vecs, _, matvecs = _block_lanczos(A, k, tol, max_iter, rng, block_size)
        used = "lanczos"

    if T is not None:
        vecs = vecs / T[:, None]
        vecs = vecs / np.linalg.norm(vecs, axis=0)
        A = _as_operator(L)
    vecs = canonicalize_signs(vecs)
    res = np.linalg.norm(A @ vecs - vecs * vals, axis=0)
    return SpectralEmbedding(np.asarray(vals, dtype=np.float64), vecs, res, matvecs, used)


def dense_reference_eigen(M, tol=1e-14, max_sweeps=60):
    """All eigenpairs of a small dense symmetric matrix by cyclic Jacobi rotations.

    Rotations are applied in round-robin order so each round touches
    disjoint index pairs and can be vectorized. Returns eigenvalues in
    ascending order and the matching eigenvectors as columns.
    """
    A = np.array(M.toarray() if sp.issparse(M) else M, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError(f"expected a square matrix, got shape {A.shape}")
    n = A.shape[0]
    if n > DENSE_LIMIT:
        raise InputError(f"dense reference solver limited to n <= {DENSE_LIMIT}, got {n}")
    A = 0.5 * (A + A.T)
    V = np.eye(n)
    if n == 1:
        return A.diagonal().copy(), V

    # Round-robin tournament over an even number of slots; slot n (odd n) is
    # a dummy whose rotations are forced to the identity.
    m = n + (n % 2)
    if m != n:
        A = np.pad(A, ((0, 1), (0, 1)))
        V = np.pad(V, ((0, 1), (0, 1)))
        V[n, n] = 1.0
    h = m // 2
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        order = []
        for i in range(h):
            a, b = players[i], players[m - 1 - i]
            order += [min(a, b), max(a, b)]
        rounds.append(np.array(order))
        players = [players[0], players[-1]] + players[1:-1]

    norm = np.linalg.norm(A)
    pos = np.arange(m)  # pos[i]: original index stored in slot i
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(A.diagonal()))
        if off <= tol * max(norm, 1e-300):
            break
        for order in rounds:
            # bring each pair into adjacent slots (2j, 2j+1)
            where = np.empty(m, dtype=np.int64)
            where[pos] = np.arange(m)
            perm = where[order]
            A = A[np.ix_(perm, perm)]
            V = V[:, perm]
            pos = pos[perm]
            d = A.diagonal()
            app, aqq = d[0::2], d[1::2]
            apq = A[np.arange(0, m, 2), np.arange(1, m, 2)]
            active = np.abs(apq) > 1e-300
            if n % 2:
                active &= (pos[0::2] != n) & (pos[1::2] != n)
            c = np.ones(h)
            s = np.zeros(h)
            if np.any(active):
                theta = (aqq[active] - app[active]) / (2.0 * apq[active])
                big = np.abs(theta) > 1e150
                safe = np.where(big, 1.0, theta)
                t = np.sign(safe) / (np.abs(safe) + np.sqrt(safe * safe + 1.0))
                t[big] = 0.5 / theta[big]  # limit of the formula, avoids overflow
                t[theta == 0] = 1.0
                c[active] = 1.0 / np.sqrt(t * t + 1.0)
                s[active] = t * c[active]
            cols = A.reshape(m, h, 2)
            p_, q_ = cols[:, :, 0].copy(), cols[:, :, 1].copy()
            cols[:, :, 0] = p_ * c - q_ * s
            cols[:, :, 1] = p_ * s + q_ * c
            rows = A.reshape(h, 2, m)
            p_, q_ = rows[:, 0, :].copy(), rows[:, 1, :].copy()
            rows[:, 0, :] = c[:, None] * p_ - s[:, None] * q_
            rows[:, 1, :] = s[:, None] * p_ + c[:, None] * q_
            vc = V.reshape(m, h, 2)
            p_, q_ = vc[:, :, 0].copy(), vc[:, :, 1].copy()
            vc[:, :, 0] = p_ * c - q_ * s
            vc[:, :, 1] = p_ * s + q_ * c
    back = np.argsort(pos)
    A = A[np.ix_(back, back)]
    V = V[:, back]
    if m != n:
        A = A[:n, :n]
        V = V[:n, :n]
    vals = A.diagonal().copy()
    order = np.argsort(vals, kind="stable")
    return vals[order], V[:, order]
