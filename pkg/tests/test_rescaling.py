import math

import numpy as np
import pytest

from carascale.instances import Instance, generate
from carascale.linalg import orthonormalize
from carascale.rescaling import (DUAL_STRICT, PRIMAL_STRICT, UNDETERMINED, ScalingState,
                                 SolverConfig, rescale, solve, verify_certificate)

SQ2 = math.sqrt(2.0)


def line(v):
    v = np.asarray(v, float)
    return Instance(len(v), 1, v[:, None])


def test_rescale_hand():
    q = np.array([[1.0], [1.0]]) / SQ2
    q_new, state, i = rescale(q, np.array([0.5, 0.5]), ScalingState.identity(2))
    assert i == 0
    np.testing.assert_allclose(q_new[:, 0], np.array([2.0, 1.0]) / math.sqrt(5), atol=1e-15)
    np.testing.assert_array_equal(state.d, [2.0, 1.0])
    assert state.rounds == 1


def test_identity_scaling_keeps_basis():
    q = orthonormalize(np.random.default_rng(0).standard_normal((6, 2)))
    np.testing.assert_allclose(orthonormalize(np.diag(np.ones(6)) @ q), q, atol=1e-15)


def test_rescale_spans_scaled_subspace():
    rng = np.random.default_rng(1)
    q = orthonormalize(rng.standard_normal((8, 3)))
    x = rng.dirichlet(np.ones(8))
    q_new, state, i = rescale(q, x, ScalingState.identity(8))
    assert i == int(np.argmax(x))
    scaled = np.diag(state.d) @ q
    recon = q_new @ (q_new.T @ scaled)
    assert np.max(np.linalg.norm(recon - scaled, axis=0)) <= 1e-8


def test_solve_strict_line():
    inst = line([1.0, 1.0])
    out = solve(inst)
    assert out.status == PRIMAL_STRICT and out.rounds == 1 and out.rescalings == 0
    np.testing.assert_allclose(out.y, [0.5, 0.5])
    assert verify_certificate(inst, out).passed


def test_solve_dual_line():
    inst = line([1.0, -1.0])
    out = solve(inst)
    assert out.status == DUAL_STRICT and out.rounds == 1
    assert verify_certificate(inst, out).passed


def test_solve_boundary_undetermined():
    inst = line([0.0, 1.0])
    out = solve(inst, SolverConfig(max_rounds=7))
    assert out.status == UNDETERMINED and out.rounds == 7 and out.y is None
    assert out.rescalings == 14


def test_verify_detects_bad_vectors():
    inst = line([1.0, 1.0])
    y = solve(inst).y
    assert verify_certificate(inst, y, side="primal").passed
    bad = y.copy()
    bad[0] = -bad[0]
    rep = verify_certificate(inst, bad, side="primal")
    assert not rep.passed and rep.min_entry < 0
    off = y + 1e-3 * np.linalg.norm(y) * np.array([1.0, -1.0]) / SQ2
    rep = verify_certificate(inst, off, side="primal")
    assert not rep.passed and rep.membership_residual > 1e-8 * rep.norm


def test_verify_needs_solution():
    with pytest.raises(ValueError):
        verify_certificate(line([0.0, 1.0]), solve(line([0.0, 1.0]), SolverConfig(max_rounds=1)))


@pytest.mark.parametrize("procedure", ["lsp", "lsvn", "lsvna", "baseline_vn"])
def test_solve_with_rescalings(procedure):
    inst = generate("primal", 30, 3, 2, hardness=1e-2)
    out = solve(inst, SolverConfig(procedure=procedure))
    assert out.status == PRIMAL_STRICT
    assert verify_certificate(inst, out).passed


def test_scaling_state_invariants():
    inst = generate("primal", 30, 3, 2, hardness=1e-2)
    out = solve(inst, SolverConfig(procedure="lsvn"))
    assert out.rescalings > 0
    for st in (out.primal_scaling, out.dual_scaling):
        assert np.all(st.d >= 1)
        exps = np.log2(st.d)
        np.testing.assert_array_equal(exps, np.round(exps))
    assert out.primal_scaling.rounds + out.dual_scaling.rounds == out.rescalings
    # each rescale doubles exactly one coordinate
    total = np.sum(np.log2(out.primal_scaling.d)) + np.sum(np.log2(out.dual_scaling.d))
    assert total == out.rescalings


@pytest.mark.parametrize("n,m", [(20, 2), (60, 5), (100, 10)])
def test_generated_primal_feasible_solved(n, m):
    for seed in range(1, 6):
        inst = generate("primal", n, m, seed)
        out = solve(inst, SolverConfig(procedure="lsvna", max_rounds=200))
        assert out.status == PRIMAL_STRICT
        assert verify_certificate(inst, out).passed


def test_round_trace_recorded():
    inst = generate("dual", 20, 3, 1)
    out = solve(inst)
    assert out.status == DUAL_STRICT
    sides = [rt.side for rt in out.trace]
    assert sides[0] == "primal" and sides[-1] == "dual"
    assert out.trace[0].rescaled_index >= 0
