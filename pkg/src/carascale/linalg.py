"""Dense kernels: orthonormalization, projection and a direct pseudoinverse.

Matrices are plain ``numpy`` float64 arrays. An orthonormal basis of a
subspace L of R^n is stored as an ``(n, m)`` array ``Q`` with ``Q.T @ Q = I``,
so the orthogonal projector onto L is ``Q @ Q.T`` (never formed explicitly).
"""

import warnings

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

ORTHO_TOL = 1e-10


class RankDeficient(ValueError):
    """Matrix does not have full column rank to working precision."""


class DimensionMismatch(ValueError):
    pass


def _as_matrix(a):
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def orthonormalize(raw_basis, tol=1e-10):
    """Orthonormal basis for the column span of ``raw_basis``.

    Modified Gram-Schmidt with one reorthogonalization pass. Raises
    ``RankDeficient`` when a column's residual after projecting out the
    previous columns falls below ``tol`` times its original norm.
    """
    a = _as_matrix(raw_basis)
    n, k = a.shape
    if k > n:
        raise RankDeficient(f"{k} columns cannot be independent in R^{n}")
    q = np.zeros((n, k))
    for c in range(k):
        v = a[:, c].copy()
        norm0 = np.linalg.norm(v)
        for _ in range(2):
            for p in range(c):
                v -= (q[:, p] @ v) * q[:, p]
        norm1 = np.linalg.norm(v)
        if norm0 == 0.0 or norm1 <= tol * norm0:
            raise RankDeficient(f"column {c} is dependent on the previous columns")
        q[:, c] = v / norm1
    return q


def is_orthonormal(q, tol=ORTHO_TOL):
    q = np.asarray(q, dtype=float)
    return np.max(np.abs(q.T @ q - np.eye(q.shape[1])), initial=0.0) <= tol


def _lu(g):
    """LU with partial pivoting; ``RankDeficient`` on a negligible pivot."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(g, check_finite=False)
    scale = np.max(np.abs(g), initial=0.0)
    if scale == 0.0 or np.min(np.abs(np.diag(lu))) <= g.shape[0] * np.finfo(float).eps * scale:
        raise RankDeficient("matrix is singular to working precision")
    return lu, piv


def pseudoinverse_direct(m, refine=2):
    """Left pseudoinverse ``(M^T M)^{-1} M^T`` of a full-column-rank matrix.

    Solved from the normal equations by Gaussian elimination with partial
    pivoting, then refined with ``X += (M^T M)^{-1} M^T (I - M X)``. The
    residual is formed without ``M^T M`` and in extended precision, which
    brings the error from ``cond(M)^2 eps`` down to about ``eps |X|`` on the
    small, moderately conditioned matrices it is used on. Computed from scratch,
    independent of any incremental update, so it can serve as a reference.
    """
    m = _as_matrix(m)
    g = m.T @ m
    lu = _lu(g)
    x = lu_solve(lu, m.T, check_finite=False)
    m_ext = m.astype(np.longdouble)
    for _ in range(refine):
        r = m_ext.T - m_ext.T @ (m_ext @ x.astype(np.longdouble))
        x += lu_solve(lu, r.astype(float), check_finite=False)
    return x


def positive_part(v):
    return np.maximum(np.asarray(v, dtype=float), 0.0)


def project(q, x):
    """Orthogonal projection of ``x`` onto span(q), computed as ``q @ (q.T @ x)``."""
    q = np.asarray(q, dtype=float)
    x = np.asarray(x, dtype=float)
    if x.shape[0] != q.shape[0]:
        raise DimensionMismatch(f"vector of length {x.shape[0]} for basis in R^{q.shape[0]}")
    return q @ (q.T @ x)


def complement_basis(q):
    """Orthonormal basis of the orthogonal complement of span(q).

    Gram-Schmidt on the unit vectors e_1..e_n after removing their component
    in span(q). At each step the candidate with the largest remaining residual
    is taken (smallest index on ties), which keeps the completion well
    conditioned.
    """
    q = _as_matrix(q)
    n, m = q.shape
    if m >= n:
        raise ValueError("complement of a full-dimensional subspace is trivial")
    w = np.eye(n) - q @ q.T
    out = np.zeros((n, n - m))
    for c in range(n - m):
        i = int(np.argmax(np.einsum("ij,ij->j", w, w)))
        v = w[:, i].copy()
        # second pass against everything already chosen
        v -= q @ (q.T @ v)
        v -= out[:, :c] @ (out[:, :c].T @ v)
        v /= np.linalg.norm(v)
        out[:, c] = v
        w -= np.outer(v, v @ w)
    return out
