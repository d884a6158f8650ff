"""Projection-and-rescaling driver.

Alternates a basic procedure on the (rescaled) primal subspace L and on the
(rescaled) complement L^perp. A rescaling certificate ``x`` doubles the
coordinate carrying ``|x|_inf``, i.e. replaces the subspace S by D S with
``D = I + e_i e_i^T``. Each side keeps its own accumulated diagonal ``d``;
a strict point ``y`` of ``diag(d) S`` maps back to ``y / d`` in S.
"""

from dataclasses import dataclass, field

import numpy as np

from .caratheodory import NumericalBreakdown
from .linalg import RankDeficient, orthonormalize, project
from .procedures import BUDGET, CERTIFICATE, STRICT, ProcedureKind, run_procedure

PRIMAL_STRICT = "primal_strict"
DUAL_STRICT = "dual_strict"
UNDETERMINED = "undetermined"
BREAKDOWN = "breakdown"

MEMBERSHIP_TOL = 1e-8


@dataclass
class ScalingState:
    d: np.ndarray
    rounds: int = 0

    @classmethod
    def identity(cls, n):
        return cls(np.ones(n))


@dataclass
class SolverConfig:
    procedure: ProcedureKind = ProcedureKind.LSVN
    max_rounds: int = 200
    per_round_budget: int = None
    refactor: bool = True


@dataclass
class RoundTrace:
    round: int
    side: str  # "primal" or "dual"
    status: str
    iterations: int
    max_support: int
    counted_ops: int
    mirr_calls: int
    mirr_ops: int
    m: int
    decay_violations: int = 0
    rescaled_index: int = -1


@dataclass
class SolveOutcome:
    status: str
    y: np.ndarray = None
    rounds: int = 0
    rescalings: int = 0
    primal_scaling: ScalingState = None
    dual_scaling: ScalingState = None
    trace: list = field(default_factory=list)


@dataclass
class VerificationReport:
    passed: bool
    min_entry: float
    membership_residual: float
    norm: float
    side: str

    def describe(self):
        return (f"side={self.side} min_entry={self.min_entry:.6g} "
                f"membership_residual={self.membership_residual:.6g} "
                f"norm={self.norm:.6g} -> {'PASS' if self.passed else 'FAIL'}")


def rescale(q, x_hat, state):
    """Double the coordinate where ``x_hat`` is largest (smallest index on ties)."""
    i = int(np.argmax(x_hat))
    scaled = np.array(q, dtype=float)
    scaled[i] *= 2.0
    try:
        q_new = orthonormalize(scaled)
    except RankDeficient as exc:  # a positive diagonal scaling cannot lose rank
        raise AssertionError("rescaling lost rank") from exc
    d = state.d.copy()
    d[i] *= 2.0
    return q_new, ScalingState(d, state.rounds + 1), i


def _basic(q, cfg):
    return run_procedure(q, cfg.procedure, budget=cfg.per_round_budget,
                         refactor=cfg.refactor, keep_history=False)


def _record(trace, rnd, side, res, m):
    tr = res.trace
    trace.append(RoundTrace(rnd, side, res.status, tr.iterations, tr.max_support,
                            tr.counted_ops, tr.mirr_calls, tr.mirr_ops, m, tr.decay_violations))


def solve(instance, cfg=None):
    """Solve the conic feasibility problem for ``instance``.

    Returns a :class:`SolveOutcome` with status ``primal_strict`` (``y`` in L,
    ``y > 0``), ``dual_strict`` (``y`` in L^perp, ``y > 0``) or
    ``undetermined`` after ``cfg.max_rounds`` rounds. ``NumericalBreakdown``
    propagates with the round number attached.
    """
    cfg = cfg or SolverConfig()
    q_primal = instance.orthonormal_basis()
    q_dual = instance.complement()
    n = q_primal.shape[0]
    sides = {
        "primal": [q_primal, ScalingState.identity(n)],
        "dual": [q_dual, ScalingState.identity(n)],
    }
    out = SolveOutcome(UNDETERMINED)
    for rnd in range(1, cfg.max_rounds + 1):
        out.rounds = rnd
        for side in ("primal", "dual"):
            q, state = sides[side]
            try:
                res = _basic(q, cfg)
            except NumericalBreakdown as exc:
                raise NumericalBreakdown(f"round {rnd} ({side}): {exc}") from exc
            _record(out.trace, rnd, side, res, q.shape[1])
            if res.status == STRICT:
                out.status = PRIMAL_STRICT if side == "primal" else DUAL_STRICT
                out.y = res.y / state.d
                break
            if res.status == CERTIFICATE:
                q, state, i = rescale(q, res.x, state)
                sides[side] = [q, state]
                out.trace[-1].rescaled_index = i
                out.rescalings += 1
            else:
                assert res.status == BUDGET
        if out.y is not None:
            break
    out.primal_scaling = sides["primal"][1]
    out.dual_scaling = sides["dual"][1]
    return out


def verify_certificate(instance, outcome_or_y, side=None):
    """Check a strict solution against the instance's original subspace."""
    if side is None:
        status = outcome_or_y.status
        if status not in (PRIMAL_STRICT, DUAL_STRICT):
            raise ValueError(f"no solution to verify in outcome {status!r}")
        y = outcome_or_y.y
        side = "primal" if status == PRIMAL_STRICT else "dual"
    else:
        y = outcome_or_y
    y = np.asarray(y, dtype=float)
    q = instance.orthonormal_basis()
    in_l = project(q, y)
    residual = y - in_l if side == "primal" else in_l
    res = float(np.linalg.norm(residual))
    norm = float(np.linalg.norm(y))
    min_entry = float(np.min(y))
    passed = min_entry > 0 and res <= MEMBERSHIP_TOL * norm
    return VerificationReport(passed, min_entry, res, norm, side)
