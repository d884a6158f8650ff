"""Incremental Carathéodory reduction with an O(m^2) pseudoinverse update.

The point being represented is ``A @ x`` where ``A`` is ``m x n`` (in the
solvers ``A = Q.T``) and ``x`` lies on the simplex. The active basis keeps
an ordered list ``B`` of column indices whose augmented columns
``(1, A[:, i])`` are linearly independent, i.e. the columns ``A[:, B]`` are
affinely independent, so ``len(B) <= m + 1`` at all times. Alongside ``B``
it caches the left pseudoinverse of the augmented active matrix.

Indices are 0-based. Simplex points are dense float arrays of length ``n``;
their support is always contained in ``B``, but members of ``B`` may carry
zero weight.
"""

from dataclasses import dataclass, field

import numpy as np

from .linalg import RankDeficient, pseudoinverse_direct

DEP_TOL = 1e-12
# |u_i| below this (relative to max(1, |u|_inf)) is treated as zero in the ratio test
PIVOT_TOL = 1e-12
DRIFT_TOL = 1e-6


class NumericalBreakdown(RuntimeError):
    """The active matrix became singular or the iteration stalled."""


def augmented(a, j):
    """Column ``j`` of ``a`` with a leading 1."""
    out = np.empty(a.shape[0] + 1)
    out[0] = 1.0
    out[1:] = a[:, j]
    return out


@dataclass
class ActiveBasis:
    basis: list
    pinv: np.ndarray  # k x (m+1)
    cols: np.ndarray  # (m+1) x k, augmented active columns
    refactor: bool = True
    ops: int = 0
    refactor_ops: int = 0
    updates: int = 0
    reductions: int = 0
    rebuilds: int = 0
    n: int = 0

    @property
    def size(self):
        return len(self.basis)


@dataclass
class Independent:
    u_prime: np.ndarray
    residual: np.ndarray
    residual_sq: float


@dataclass
class Dependent:
    u_prime: np.ndarray


@dataclass
class ReductionOutcome:
    theta: float
    pivot: int  # position in [B, j]
    replaced: bool


@dataclass
class ConsistencyReport:
    identity_err: float
    point_err: float
    simplex_defect: float
    support_in_basis: bool
    size_ok: bool
    extras: dict = field(default_factory=dict)

    def ok(self, tol=DRIFT_TOL):
        return (self.identity_err <= tol and self.point_err <= tol
                and self.simplex_defect <= tol and self.support_in_basis
                and self.size_ok)


def init_active(a, i, refactor=True):
    """Start from the vertex ``e_i``: ``B = [i]`` and ``pinv = a_i^T / |a_i|^2``."""
    a = np.asarray(a, dtype=float)
    m, n = a.shape
    col = augmented(a, i)
    x = np.zeros(n)
    x[i] = 1.0
    ab = ActiveBasis(basis=[i], pinv=(col / (col @ col))[None, :],
                     cols=col[:, None].copy(), refactor=refactor, n=n)
    return x, ab


def affine_dependence(ab, a, j, tol=DEP_TOL):
    """Classify column ``j`` against the active columns.

    Computes ``u' = pinv @ a~_j`` and the residual ``r = a~_j - A~_B u'``; the
    column is affinely independent iff ``|r|^2 > tol * |a~_j|^2``.
    """
    col = augmented(a, j)
    u = ab.pinv @ col
    r = col - ab.cols @ u
    rr = float(r @ r)
    ab.ops += 2 * u.size * col.size + col.size
    # m + 2 vectors in R^(m+1) are dependent whatever the residual says
    if ab.size < col.size and rr > tol * float(col @ col):
        return Independent(u, r, rr)
    return Dependent(u)


def extend(ab, a, j, verdict):
    """Append ``j`` to the basis using the bordered rank-one update.

    ``pinv+ = [pinv; 0] - [u'; -1] r^T / |r|^2``.
    """
    u, r, rr = verdict.u_prime, verdict.residual, verdict.residual_sq
    w = r / rr
    ab.pinv = np.vstack([ab.pinv - np.outer(u, w), w[None, :]])
    ab.cols = np.column_stack([ab.cols, augmented(a, j)])
    ab.basis.append(j)
    ab.ops += (u.size + 1) * r.size + r.size
    return ab


def reduce(ab, a, x, j, u_prime):
    """Carathéodory step for a dependent column ``j``.

    Moves ``x`` along the null direction ``u = (u', -1)`` of ``[A~_B, a~_j]``
    until the first weight hits zero. If that weight belongs to ``j`` the
    basis is unchanged; otherwise ``j`` takes the leaving column's position
    and ``pinv`` is updated by a Gauss-Jordan pivot on ``[pinv | u']``.
    ``x`` is modified in place.
    """
    k = ab.size
    pos = ab.basis + [j]
    u = np.append(u_prime, -1.0)
    xb = x[pos]
    thresh = -PIVOT_TOL * max(1.0, float(np.max(np.abs(u_prime), initial=0.0)))
    neg = np.flatnonzero(u < thresh)
    ratios = -xb[neg] / u[neg]
    best = int(np.argmin(ratios))
    theta = max(float(ratios[best]), 0.0)
    piv = int(neg[best])
    xb = xb + theta * u
    xb[piv] = 0.0
    np.maximum(xb, 0.0, out=xb)
    x[pos] = xb
    ab.reductions += 1
    ab.ops += 3 * (k + 1)
    if piv == k:
        return x, ab, ReductionOutcome(theta, piv, False)
    row = ab.pinv[piv] / u_prime[piv]
    ab.pinv -= np.outer(u_prime, row)
    ab.pinv[piv] = row
    ab.cols[:, piv] = augmented(a, j)
    ab.basis[piv] = j
    ab.ops += (k + 1) * ab.pinv.shape[1]
    return x, ab, ReductionOutcome(theta, piv, True)


def rebuild(ab):
    """Recompute ``pinv`` from scratch (O(m^3))."""
    try:
        ab.pinv = pseudoinverse_direct(ab.cols)
    except RankDeficient as exc:
        raise NumericalBreakdown(f"active matrix singular for basis {ab.basis}") from exc
    ab.rebuilds += 1
    p, k = ab.cols.shape
    ab.refactor_ops += k * k * p + k ** 3
    return ab


def mirr(ab, a, x, j):
    """One representation-reduction step after column ``j`` entered ``x``.

    Returns ``(x, ab)`` with ``A @ x`` unchanged, ``support(x) ⊆ B`` and the
    columns ``A[:, B]`` affinely independent.
    """
    verdict = affine_dependence(ab, a, j)
    if isinstance(verdict, Independent):
        extend(ab, a, j, verdict)
    else:
        x, ab, _ = reduce(ab, a, x, j, verdict.u_prime)
    ab.updates += 1
    if ab.refactor:
        if ab.n and ab.updates % (10 * ab.n) == 0:
            rebuild(ab)
        else:
            # entering column is exact by construction; probe a rotating one
            pos = ab.updates % ab.size
            e = ab.pinv @ ab.cols[:, pos]
            e[pos] -= 1.0
            ab.ops += e.size * ab.cols.shape[0]
            if np.max(np.abs(e)) > DRIFT_TOL:
                rebuild(ab)
    return x, ab


def check_consistency(ab, a, x, z=None):
    """Residuals of every invariant the active basis is supposed to satisfy."""
    a = np.asarray(a, dtype=float)
    if z is None:
        z = a @ x
    k = ab.size
    ident = float(np.max(np.abs(ab.pinv @ ab.cols - np.eye(k))))
    pt = np.concatenate([[1.0], z])
    point_err = float(np.linalg.norm(ab.cols @ (ab.pinv @ pt) - pt))
    support = set(np.flatnonzero(x).tolist())
    return ConsistencyReport(
        identity_err=ident,
        point_err=point_err,
        simplex_defect=abs(float(np.sum(x)) - 1.0),
        support_in_basis=support <= set(ab.basis),
        size_ok=k <= a.shape[0] + 1 and len(set(ab.basis)) == k,
    )
