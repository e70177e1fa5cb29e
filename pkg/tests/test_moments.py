import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skmm.errors import InvalidArgument, NumericDomainError
from skmm.moments import (
    intrinsic_dimension,
    leverage_scores,
    numerical_rank,
    second_moment,
    spectral_decomposition,
    trace_ratio,
    truncated_pinv,
)
from skmm.synth import GmmSpec, gmm_generate

from oracles import direct_intrinsic_dimension, explicit_leverage


def random_psd(rng, d, rank=None):
    A = rng.normal(size=(d, rank or d))
    return A @ A.T


# second moments


def test_second_moment_identity():
    np.testing.assert_array_equal(second_moment(np.eye(2)).entries, np.eye(2) / 2)


def test_second_moment_by_hand():
    M = second_moment(np.array([[1.0, 1], [1, -1]]))
    np.testing.assert_array_equal(M.entries, np.eye(2))
    assert M.sample_count == 2 and M.dim == 2


def test_second_moment_empty():
    with pytest.raises(InvalidArgument):
        second_moment(np.zeros((0, 3)))


def test_second_moment_symmetric_exactly():
    M = second_moment(np.random.default_rng(0).normal(size=(13, 7))).entries
    assert np.array_equal(M, M.T)


def test_gmm_noiseless_rank():
    ds = gmm_generate(GmmSpec(N=300, r=40, clusters=8, sigma_max=0.0, seed=4))
    assert numerical_rank(second_moment(ds.features).entries) <= 8


# spectral decomposition


def test_spectral_diagonal():
    spec = spectral_decomposition(np.diag([1.0, 3, 2]))
    np.testing.assert_allclose(spec.eigenvalues, [3, 2, 1])
    np.testing.assert_allclose(spec.eigenvectors, np.eye(3)[:, [1, 2, 0]], atol=1e-15)


def test_spectral_two_by_two():
    spec = spectral_decomposition(np.array([[2.0, 1], [1, 2]]))
    np.testing.assert_allclose(spec.eigenvalues, [3, 1])
    s = 1 / np.sqrt(2)
    # the largest-|entry| sign rule picks the first of tied entries
    np.testing.assert_allclose(spec.eigenvectors, [[s, s], [s, -s]], atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 12))
def test_spectral_invariants(seed, d):
    rng = np.random.default_rng(seed)
    A = random_psd(rng, d, rank=int(rng.integers(1, d + 1)))
    spec = spectral_decomposition(A)
    V, lam = spec.eigenvectors, spec.eigenvalues
    assert (np.diff(lam) <= 0).all() and (lam >= 0).all()
    assert np.abs(V.T @ V - np.eye(d)).max() <= 1e-8
    recon = (V * lam) @ V.T
    assert np.linalg.norm(recon - A) <= 1e-8 * (1 + np.linalg.norm(A))
    pivots = np.argmax(np.abs(V), axis=0)
    assert (V[pivots, np.arange(d)] > 0).all()


def test_spectral_rejects_asymmetric():
    with pytest.raises(InvalidArgument):
        spectral_decomposition(np.array([[1.0, 2], [0, 1]]))


def test_spectral_rejects_indefinite():
    with pytest.raises(NumericDomainError):
        spectral_decomposition(np.diag([1.0, -0.5]))


def test_spectral_clamps_tiny_negative():
    spec = spectral_decomposition(np.diag([1.0, -1e-10]))
    np.testing.assert_array_equal(spec.eigenvalues, [1.0, 0.0])


def test_spectral_zero_matrix():
    spec = spectral_decomposition(np.zeros((3, 3)))
    assert not spec.eigenvalues.any()
    assert not spec.positive_mask().any()


# intrinsic dimension


def test_intrinsic_rank_one():
    u = np.array([1.0, 2, -1])
    for N in (1, 5, 1000):
        assert intrinsic_dimension(np.outer(u, u), N) == 1


def test_intrinsic_identity():
    assert intrinsic_dimension(np.eye(4), 4) == 3


def test_intrinsic_zero():
    assert intrinsic_dimension(np.zeros((3, 3)), 10) == 0


def test_intrinsic_gmm_noiseless():
    ds = gmm_generate(GmmSpec(N=2000, r=40, clusters=8, sigma_max=0.0, seed=1))
    assert intrinsic_dimension(second_moment(ds.features), 2000) <= 8


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 10))
def test_intrinsic_properties(seed, d):
    rng = np.random.default_rng(seed)
    A = random_psd(rng, d, rank=int(rng.integers(1, d + 1)))
    rank = numerical_rank(A)
    prev = None
    for N in (1, 2, 5, 20, 100, 10_000):
        t = intrinsic_dimension(A, N)
        assert t == direct_intrinsic_dimension(A, N)
        assert 1 <= t <= rank
        if prev is not None:
            assert t >= prev  # larger N, stricter threshold
        prev = t


def test_intrinsic_bad_N():
    with pytest.raises(InvalidArgument):
        intrinsic_dimension(np.eye(2), 0)


# leverage scores


def test_leverage_orthonormal_rows():
    Q, _ = np.linalg.qr(np.random.default_rng(0).normal(size=(9, 4)))
    np.testing.assert_allclose(leverage_scores(Q.T, "plain"), np.ones(4), atol=1e-12)


def test_leverage_by_hand():
    M = np.array([[1.0, 0], [0, 2]])
    np.testing.assert_allclose(leverage_scores(M, "plain"), [1, 1])
    np.testing.assert_allclose(leverage_scores(M, "ridge", rho=1.0), [0.5, 0.8])
    np.testing.assert_allclose(leverage_scores(M, "truncated", k=1), [0, 1])


@pytest.mark.parametrize("shape", [(20, 50), (50, 20)])
def test_leverage_matches_explicit_inverse(shape):
    M = np.random.default_rng(1).normal(size=shape)
    plain = explicit_leverage(M)
    ridge = explicit_leverage(M, rho=2.0)
    U, s, Wt = np.linalg.svd(M, full_matrices=False)
    Mk = (U[:, :3] * s[:3]) @ Wt[:3]
    trunc = np.einsum("ij,jk,ik->i", Mk, np.linalg.pinv(Mk.T @ Mk), Mk)
    np.testing.assert_allclose(leverage_scores(M, "plain"), plain, atol=1e-8)
    np.testing.assert_allclose(leverage_scores(M, "ridge", rho=2.0), ridge, atol=1e-8)
    np.testing.assert_allclose(leverage_scores(M, "truncated", k=3), trunc, atol=1e-8)


def test_leverage_rank_deficient():
    rng = np.random.default_rng(3)
    M = rng.normal(size=(15, 3)) @ rng.normal(size=(3, 30))
    scores = leverage_scores(M, "plain")
    assert np.isclose(scores.sum(), 3)
    with pytest.raises(InvalidArgument):
        leverage_scores(M, "truncated", k=4)


@pytest.mark.parametrize("kw", [{"variant": "ridge", "rho": 0.0}, {"variant": "truncated", "k": 0}, {"variant": "bogus"}])
def test_leverage_bad_args(kw):
    with pytest.raises(InvalidArgument):
        leverage_scores(np.eye(3), **kw)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_ridge_leverage_monotone_in_rho(seed):
    M = np.random.default_rng(seed).normal(size=(12, 7))
    a, b, c = (leverage_scores(M, "ridge", rho=rho) for rho in (0.1, 1.0, 10.0))
    assert (a >= b).all() and (b >= c).all()
    assert (leverage_scores(M, "plain") >= a - 1e-12).all()


# truncated pseudoinverse and trace ratio


def test_truncated_pinv_diag():
    np.testing.assert_allclose(truncated_pinv(np.diag([4.0, 2, 0])), np.diag([0.25, 0.5, 0]))
    np.testing.assert_allclose(truncated_pinv(np.diag([4.0, 2, 0]), k=1), np.diag([0.25, 0, 0]))


def test_trace_ratio_identical():
    A = random_psd(np.random.default_rng(0), 5)
    out = trace_ratio(A, A, k=5)
    assert abs(out["trace"] - 5) <= 1e-10 * 5
    assert abs(out["spectral"] - 1) <= 1e-10


def test_trace_ratio_diag():
    out = trace_ratio(np.diag([2.0, 0]), np.diag([1.0, 5]), k=2)
    assert out == pytest.approx({"trace": 2.0, "spectral": 2.0, "operator_norm": 2.0})
    out = trace_ratio(np.diag([2.0, 0]), np.diag([1.0, 5]), k=1)
    assert out == pytest.approx({"trace": 0.0, "spectral": 0.0, "operator_norm": 0.0})


def test_trace_ratio_mismatch():
    with pytest.raises(InvalidArgument):
        trace_ratio(np.eye(2), np.eye(3))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.2, 1.0))
def test_trace_ratio_under_loewner_order(seed, c):
    # sigma <= c * sigma_S  =>  tr(sigma sigma_S^+) <= c m and ||.||_2 <= c
    rng = np.random.default_rng(seed)
    m = 4
    sigma = random_psd(rng, m)
    sigma_S = (sigma + random_psd(rng, m, rank=2)) / c
    out = trace_ratio(sigma, sigma_S)
    assert out["trace"] <= c * m * (1 + 1e-9)
    assert out["spectral"] <= c * (1 + 1e-9)
    # the non-symmetric product's 2-norm is not bounded this way, only its eigenvalues
    assert out["operator_norm"] >= out["spectral"] * (1 - 1e-9)
