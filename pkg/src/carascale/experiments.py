"""Experiment drivers shared by the acceptance suite and scripts/."""

from dataclasses import dataclass, field

import numpy as np

from .caratheodory import check_consistency, init_active, mirr
from .linalg import pseudoinverse_direct


@dataclass
class SequenceStats:
    calls: int = 0
    ops: int = 0
    max_pinv_err: float = 0.0
    max_repr_err: float = 0.0  # |A x+ - A x| / (1 + |A x|)
    max_size: int = 0
    max_rank_deficit: int = 0
    extends: int = 0
    per_call_ops: list = field(default_factory=list)
    rejected: int = 0
    max_cond: float = 0.0


def _snapshot(x, ab):
    return x.copy(), list(ab.basis), ab.pinv.copy(), ab.cols.copy()


def _restore(ab, snap):
    ab.basis, ab.pinv, ab.cols = snap[1], snap[2], snap[3]
    return snap[0]


def mirr_sequence(a, calls, rng, refactor=False, check_every=1, check_rank=False,
                  max_cond=None, max_retries=50):
    """Drive ``calls`` random mIRR updates on the columns of ``a``.

    Each step moves a random fraction of mass onto a random column outside
    the basis and then reduces. When ``check_every`` divides the call
    number, the cached pseudoinverse is compared with the direct one.

    With ``max_cond`` set, a proposal whose resulting augmented active matrix
    has 2-norm condition number above ``max_cond`` is undone and another
    column is drawn, so only well-conditioned bases are visited. The
    sequence ends early if ``max_retries`` proposals in a row are rejected.
    """
    m, n = a.shape
    x, ab = init_active(a, int(rng.integers(n)), refactor=refactor)
    st = SequenceStats()
    for c in range(1, calls + 1):
        for _ in range(max_retries):
            j = int(rng.integers(n))
            while j in ab.basis:
                j = int(rng.integers(n))
            snap = _snapshot(x, ab) if max_cond else None
            theta = rng.uniform(0.05, 0.95)
            x *= 1.0 - theta
            x[j] += theta
            target = a @ x
            tnorm = np.sqrt(target @ target)
            before, size_before = ab.ops, ab.size
            x, ab = mirr(ab, a, x, j)
            if not max_cond:
                break
            cond = np.linalg.cond(ab.cols)
            if cond <= max_cond:
                st.max_cond = max(st.max_cond, cond)
                break
            st.rejected += 1
            x = _restore(ab, snap)
        else:
            break
        st.calls += 1
        st.per_call_ops.append(ab.ops - before)
        st.ops += ab.ops - before
        st.extends += ab.size > size_before
        st.max_size = max(st.max_size, ab.size)
        d = a @ x - target
        st.max_repr_err = max(st.max_repr_err, np.sqrt(d @ d) / (1.0 + tnorm))
        if check_every and c % check_every == 0:
            st.max_pinv_err = max(st.max_pinv_err,
                                  float(np.max(np.abs(ab.pinv - pseudoinverse_direct(ab.cols)))))
            assert ab.size <= m + 1 and np.all(x[ab.basis].sum() >= 1.0 - 1e-10)
            if check_rank:
                st.max_rank_deficit = max(st.max_rank_deficit,
                                          ab.size - int(np.linalg.matrix_rank(ab.cols)))
    rep = check_consistency(ab, a, x)
    assert rep.support_in_basis and rep.size_ok, rep
    return st


def loglog_slope(xs, ys):
    """Least-squares slope of ``log y`` against ``log x``."""
    lx, ly = np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float))
    return float(np.polyfit(lx, ly, 1)[0])


def mean_ops_per_call(m, n, calls, seed, warmup=None):
    """Mean counted multiply-adds per mIRR call once the basis is saturated."""
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((m, n))
    st = mirr_sequence(a, calls, rng, refactor=False, check_every=0)
    warmup = m + 1 if warmup is None else warmup
    return float(np.mean(st.per_call_ops[warmup:]))
