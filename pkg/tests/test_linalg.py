import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from carascale.linalg import (DimensionMismatch, RankDeficient, complement_basis, is_orthonormal,
                              orthonormalize, positive_part, project, pseudoinverse_direct)

SQ2 = np.sqrt(2.0)


def test_orthonormalize_hand_gram_schmidt():
    q = orthonormalize([[1.0, 1.0], [0.0, 1.0]])
    np.testing.assert_allclose(q, np.eye(2), atol=1e-15)


def test_orthonormalize_normalizes_single_column():
    np.testing.assert_allclose(orthonormalize([[3.0], [0.0], [0.0]]), [[1.0], [0.0], [0.0]])


def test_orthonormalize_rejects_dependent_columns():
    with pytest.raises(RankDeficient):
        orthonormalize([[1.0, 2.0], [0.0, 0.0]])
    with pytest.raises(RankDeficient):
        orthonormalize(np.zeros((3, 1)))


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 30), data=st.data())
def test_orthonormalize_spans_input(seed, n, data):
    k = data.draw(st.integers(1, n))
    a = np.random.default_rng(seed).standard_normal((n, k))
    q = orthonormalize(a)
    assert is_orthonormal(q)
    recon = q @ (q.T @ a)
    assert np.all(np.linalg.norm(recon - a, axis=0) <= 1e-8 * np.linalg.norm(a, axis=0))


def test_orthonormalize_ill_conditioned_stays_orthonormal():
    eps = 1e-9
    a = np.array([[1.0, 1.0, 1.0], [eps, 0, 0], [0, eps, 0], [0, 0, eps]])
    assert is_orthonormal(orthonormalize(a, tol=1e-12))


def test_pseudoinverse_unit_column():
    np.testing.assert_allclose(pseudoinverse_direct([[1.0], [0.0], [0.0]]), [[1.0, 0.0, 0.0]])


def test_pseudoinverse_hand_example():
    m = np.array([[1.0, 1.0], [0.0, 1.0], [0.0, 0.0]])
    p = pseudoinverse_direct(m)
    np.testing.assert_allclose(p, [[1.0, -1.0, 0.0], [0.0, 1.0, 0.0]], atol=1e-15)
    np.testing.assert_allclose(p @ m, np.eye(2), atol=1e-15)


def test_pseudoinverse_rank_deficient():
    with pytest.raises(RankDeficient):
        pseudoinverse_direct([[1.0, 2.0], [2.0, 4.0]])


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), p=st.integers(1, 12), data=st.data())
def test_pseudoinverse_left_inverse_and_matches_svd(seed, p, data):
    q = data.draw(st.integers(1, min(p, 6)))
    m = np.random.default_rng(seed).standard_normal((p, q))
    pi = pseudoinverse_direct(m)
    assert np.max(np.abs(pi @ m - np.eye(q))) <= 1e-8
    np.testing.assert_allclose(pi, np.linalg.pinv(m), atol=1e-8)


def test_pseudoinverse_refinement_beats_plain_normal_equations():
    # cond(M) ~ 1e5: plain normal equations lose ~cond^2 eps
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 50
    rng = np.random.default_rng(3)
    u, _ = np.linalg.qr(rng.standard_normal((8, 4)))
    v, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    m = u @ np.diag([1.0, 1e-2, 1e-3, 1e-5]) @ v.T
    mp = mpmath.matrix(m.tolist())
    exact = np.array(((mp.T * mp) ** -1 * mp.T).tolist(), dtype=float)
    err_plain = np.max(np.abs(pseudoinverse_direct(m, refine=0) - exact))
    err = np.max(np.abs(pseudoinverse_direct(m) - exact))
    assert err < 1e-5 * np.max(np.abs(exact)) * 1e-3
    assert err < err_plain


@pytest.mark.parametrize("v, expected", [
    ([1, -2, 0], [1, 0, 0]),
    ([-1, -1], [0, 0]),
    ([0.5, 0.25], [0.5, 0.25]),
])
def test_positive_part(v, expected):
    np.testing.assert_array_equal(positive_part(v), expected)


def test_project_examples():
    q = np.array([[1.0], [1.0]]) / SQ2
    np.testing.assert_allclose(project(q, [1.0, 0.0]), [0.5, 0.5])
    np.testing.assert_allclose(project(q, [3.0, 3.0]), [3.0, 3.0])
    np.testing.assert_allclose(project(q, [1.0, -1.0]), [0.0, 0.0], atol=1e-16)
    np.testing.assert_allclose(project(q, project(q, [1.0, 0.0])), [0.5, 0.5])


def test_project_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        project(np.eye(3)[:, :1], np.ones(2))


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 30), data=st.data())
def test_project_linear_idempotent_symmetric(seed, n, data):
    m = data.draw(st.integers(1, n))
    rng = np.random.default_rng(seed)
    q = orthonormalize(rng.standard_normal((n, m)))
    a, b = rng.standard_normal(n), rng.standard_normal(n)
    pa, pb = project(q, a), project(q, b)
    assert np.linalg.norm(project(q, pa) - pa) <= 1e-10 * (1 + np.linalg.norm(a))
    assert abs(pa @ b - a @ pb) <= 1e-10 * (1 + np.linalg.norm(a) * np.linalg.norm(b))
    np.testing.assert_allclose(project(q, 2 * a - b), 2 * pa - pb, atol=1e-10)


def test_complement_basis_examples():
    np.testing.assert_allclose(np.abs(complement_basis(np.array([[1.0], [0.0]]))), [[0.0], [1.0]])
    qp = complement_basis(np.array([[1.0], [1.0]]) / SQ2)
    assert qp.shape == (2, 1)
    np.testing.assert_allclose(np.abs(qp[:, 0]), [1 / SQ2, 1 / SQ2], atol=1e-15)
    assert qp[0, 0] * qp[1, 0] < 0


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 40), data=st.data())
def test_complement_basis_property(seed, n, data):
    m = data.draw(st.integers(1, n - 1))
    q = orthonormalize(np.random.default_rng(seed).standard_normal((n, m)))
    qp = complement_basis(q)
    assert qp.shape == (n, n - m)
    assert is_orthonormal(qp)
    assert np.max(np.abs(q.T @ qp)) <= 1e-10
