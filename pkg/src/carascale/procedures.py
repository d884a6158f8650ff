"""Basic procedures: Von Neumann / Perceptron schemes on the simplex.

Each procedure approximately minimizes ``|Q^T x|^2`` over the simplex and
stops as soon as either ``P x > 0`` (a strict solution) or
``|(P x)^+| <= |x|_inf / (3 sqrt(n))`` (a rescaling certificate).

The limited-support variants (LSP, LSVN, LSVNA) keep the iterate as a
convex combination of at most ``m + 1`` affinely independent rows of ``Q``
by calling :func:`carascale.caratheodory.mirr` whenever a new vertex enters.
The baselines run the same loop on a dense iterate.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .caratheodory import NumericalBreakdown, init_active, mirr


class ProcedureKind(str, Enum):
    LSP = "lsp"
    LSVN = "lsvn"
    LSVNA = "lsvna"
    BASELINE_PERCEPTRON = "baseline_perceptron"
    BASELINE_VN = "baseline_vn"
    BASELINE_VNA = "baseline_vna"

    @property
    def limited(self):
        return self in (ProcedureKind.LSP, ProcedureKind.LSVN, ProcedureKind.LSVNA)

    @property
    def rule(self):
        """Step rule shared by a limited-support variant and its baseline."""
        return {
            ProcedureKind.LSP: "perceptron",
            ProcedureKind.BASELINE_PERCEPTRON: "perceptron",
            ProcedureKind.LSVN: "linesearch",
            ProcedureKind.BASELINE_VN: "linesearch",
            ProcedureKind.LSVNA: "away",
            ProcedureKind.BASELINE_VNA: "away",
        }[self]


LIMITED_KINDS = (ProcedureKind.LSP, ProcedureKind.LSVN, ProcedureKind.LSVNA)
BASELINE_KINDS = (ProcedureKind.BASELINE_PERCEPTRON, ProcedureKind.BASELINE_VN,
                  ProcedureKind.BASELINE_VNA)

DECAY_SLACK = 1e-9

STRICT = "strict"
CERTIFICATE = "certificate"
CONTINUE = "continue"
BUDGET = "budget"


def iteration_bound(n, m):
    """Worst-case iteration count ``9 (m+1)^2 n`` of the limited-support schemes."""
    return 9 * (m + 1) ** 2 * n


@dataclass(frozen=True)
class StoppingPolicy:
    eps: float
    strict_tol: float = 0.0
    slack: float = 1e-15

    @classmethod
    def for_dim(cls, n):
        return cls(eps=1.0 / (3.0 * math.sqrt(n)))


@dataclass
class StateEval:
    y: np.ndarray
    verdict: str
    j_min: int

    @property
    def inner_products(self):
        # <q_i, z> = (P x)_i
        return self.y


@dataclass
class StepChoice:
    kind: str  # "regular" or "away"
    j: int
    k: int = -1
    theta: float = 0.0
    theta_max: float = 1.0


@dataclass
class Trace:
    iterations: int = 0
    max_support: int = 0
    max_basis: int = 0
    counted_ops: int = 0
    mirr_calls: int = 0
    mirr_ops: int = 0
    rebuilds: int = 0
    z_norm_sq: list = field(default_factory=list)
    decay_violations: int = 0


@dataclass
class BasicResult:
    status: str  # STRICT, CERTIFICATE or BUDGET
    x: np.ndarray
    y: np.ndarray
    kind: ProcedureKind
    trace: Trace

    @property
    def is_strict(self):
        return self.status == STRICT


def evaluate_state(q, x, z, policy):
    """Projected point ``y = Q z`` and the stopping verdict for the iterate."""
    y = q @ z
    if np.min(y) > policy.strict_tol:
        verdict = STRICT
    elif np.linalg.norm(np.maximum(y, 0.0)) <= policy.eps * np.max(x) + policy.slack:
        verdict = CERTIFICATE
    else:
        verdict = CONTINUE
    return StateEval(y=y, verdict=verdict, j_min=int(np.argmin(y)))


def step_perceptron(t):
    return 1.0 / (t + 1)


def step_linesearch(z, q_j):
    """Minimizer over [0, 1] of ``|z + theta (q_j - z)|^2``; 0 for a degenerate direction."""
    d = z - q_j
    dd = float(d @ d)
    if dd <= 1e-24:
        return 0.0
    return min(max(float(z @ d) / dd, 0.0), 1.0)


def choose_direction_away(a, x, z, y, j):
    """Regular-vs-away decision of the away-step scheme, with its step length.

    ``a`` holds the rows of ``Q`` as columns. ``j`` is the toward vertex
    (argmin of ``y`` over all indices); the away vertex ``k`` is the argmax of
    ``y`` over the support of ``x``. The step is the exact line search along
    ``e_j - x`` (capped at 1) or ``x - e_k`` (capped at ``x_k / (1 - x_k)``).
    """
    support = np.flatnonzero(x)
    k = int(support[np.argmax(y[support])])
    zz = float(z @ z)
    if zz - y[j] > y[k] - zz:
        return StepChoice("regular", j, k, step_linesearch(z, a[:, j]), 1.0)
    xk = float(x[k])
    if xk >= 1.0:
        return StepChoice("away", j, k, 0.0, math.inf)
    theta_max = xk / (1.0 - xk)
    pa = z - a[:, k]
    pp = float(pa @ pa)
    theta = 0.0 if pp <= 1e-24 else min(theta_max, max(-float(z @ pa) / pp, 0.0))
    return StepChoice("away", j, k, theta, theta_max)


def _take_step(x, step):
    if step.kind == "regular":
        x *= 1.0 - step.theta
        x[step.j] += step.theta
    else:
        x *= 1.0 + step.theta
        x[step.k] -= step.theta
        if step.theta == step.theta_max:
            x[step.k] = 0.0
        np.maximum(x, 0.0, out=x)
    return x


def run_procedure(q, kind, policy=None, budget=None, start=0, refactor=True,
                  keep_history=True, callback=None):
    """Run one basic procedure on the subspace spanned by the orthonormal ``q``.

    Starts from the vertex ``e_start``. Returns a :class:`BasicResult` whose
    status is STRICT, CERTIFICATE, or BUDGET when ``budget`` iterations pass
    without either stopping condition firing (the default budget is
    :func:`iteration_bound`). Raises ``NumericalBreakdown`` when more than
    ``n`` consecutive steps have zero length.

    ``callback(t, x, z, y, ab)`` is invoked on every iterate, before the
    stopping test; ``ab`` is None for the baselines.
    """
    kind = ProcedureKind(kind)
    q = np.asarray(q, dtype=float)
    n, m = q.shape
    a = np.ascontiguousarray(q.T)
    policy = policy or StoppingPolicy.for_dim(n)
    budget = iteration_bound(n, m) if budget is None else budget
    if kind.limited:
        x, ab = init_active(a, start, refactor=refactor)
    else:
        x, ab = np.zeros(n), None
        x[start] = 1.0
    z = a[:, start].copy()
    tr = Trace()
    t = 0
    stalled = 0
    while True:
        ev = evaluate_state(q, x, z, policy)
        if callback is not None:
            callback(t, x, z, ev.y, ab)
        zz = float(z @ z)
        supp = np.flatnonzero(x)
        tr.counted_ops += n * m + n
        tr.max_support = max(tr.max_support, supp.size)
        if ab is not None:
            tr.max_basis = max(tr.max_basis, ab.size)
        if keep_history:
            tr.z_norm_sq.append(zz)
        if t >= 1 and zz > (1.0 + DECAY_SLACK) / t:
            tr.decay_violations += 1
        if ev.verdict != CONTINUE or t >= budget:
            tr.iterations = t
            if ab is not None:
                tr.rebuilds = ab.rebuilds
            status = BUDGET if ev.verdict == CONTINUE else ev.verdict
            return BasicResult(status, x, ev.y, kind, tr)

        j = ev.j_min
        if kind.rule == "perceptron":
            step = StepChoice("regular", j, theta=step_perceptron(t))
        elif kind.rule == "linesearch":
            step = StepChoice("regular", j, theta=step_linesearch(z, a[:, j]))
        else:
            step = choose_direction_away(a, x, z, ev.y, j)
        tr.counted_ops += 4 * m
        stalled = stalled + 1 if step.theta == 0.0 else 0
        if stalled > n:
            raise NumericalBreakdown(f"{kind.value}: {stalled} consecutive zero-length steps")

        x = _take_step(x, step)
        if ab is not None and step.kind == "regular" and j not in ab.basis:
            before = ab.ops
            x, ab = mirr(ab, a, x, j)
            tr.mirr_calls += 1
            tr.mirr_ops += ab.ops - before
            tr.counted_ops += ab.ops - before
        supp = np.flatnonzero(x)
        z = a[:, supp] @ x[supp]
        tr.counted_ops += m * supp.size + n
        t += 1


def run_basic(q, kind, policy=None, budget=None, **kwargs):
    """Limited-support scheme (LSP, LSVN or LSVNA)."""
    if not ProcedureKind(kind).limited:
        raise ValueError(f"{kind} is not a limited-support procedure")
    return run_procedure(q, kind, policy, budget, **kwargs)


def run_baseline(q, kind, policy=None, budget=None, **kwargs):
    """Dense-iterate baseline (no representation reduction)."""
    if ProcedureKind(kind).limited:
        raise ValueError(f"{kind} is not a baseline procedure")
    return run_procedure(q, kind, policy, budget, **kwargs)
