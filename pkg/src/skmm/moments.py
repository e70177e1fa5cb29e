"""Second moments, their spectra, intrinsic dimension and leverage scores."""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, NumericDomainError

# eigenvalues below PINV_RTOL * lambda_max are treated as zero
PINV_RTOL = 1e-10
SYM_RTOL = 1e-10
PSD_RTOL = 1e-8


@dataclass(frozen=True)
class MomentMatrix:
    entries: np.ndarray
    sample_count: int

    @property
    def dim(self):
        return self.entries.shape[0]


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenpairs of a PSD moment, eigenvalues in descending order."""

    eigenvectors: np.ndarray
    eigenvalues: np.ndarray

    def positive_mask(self, rtol=PINV_RTOL):
        lam = self.eigenvalues
        if lam.size == 0 or lam[0] <= 0:
            return np.zeros(lam.shape, dtype=bool)
        return lam > rtol * lam[0]


def _as_array(M):
    return M.entries if isinstance(M, MomentMatrix) else np.asarray(M, dtype=np.float64)


def second_moment(M):
    """``M^T M / k`` for a (k, d) matrix, symmetrized."""
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise InvalidArgument("second_moment needs a non-empty 2-d matrix")
    A = M.T @ M / M.shape[0]
    return MomentMatrix((A + A.T) / 2, M.shape[0])


def spectral_decomposition(sigma):
    """Symmetric eigendecomposition with descending, clamped eigenvalues.

    Each eigenvector is signed so its largest-magnitude entry is positive
    (the first such entry on ties).
    """
    A = _as_array(sigma)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise InvalidArgument("moment matrix must be square and non-empty")
    scale = max(np.abs(A).max(initial=0.0), np.finfo(float).tiny)
    if np.abs(A - A.T).max(initial=0.0) > SYM_RTOL * scale:
        raise InvalidArgument("moment matrix is not symmetric")
    lam, V = np.linalg.eigh((A + A.T) / 2)
    order = np.argsort(-lam, kind="stable")
    lam, V = lam[order], V[:, order]
    # a (numerically) zero matrix is judged against its entry scale instead
    reference = lam[0] if lam[0] > 0 else scale
    if lam[-1] < -PSD_RTOL * reference:
        raise NumericDomainError(f"moment matrix is not PSD (min eigenvalue {lam[-1]:.3e})")
    lam = np.maximum(lam, 0.0)
    pivots = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[pivots, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return SpectralDecomposition(V * signs, lam)


def intrinsic_dimension(sigma, N):
    """Smallest t with sum(lambda_{t+1:}) <= tr(sigma) / N; 0 for a zero matrix."""
    if int(N) < 1:
        raise InvalidArgument("N must be at least 1")
    if isinstance(sigma, SpectralDecomposition):
        lam = sigma.eigenvalues
    else:
        lam = spectral_decomposition(sigma).eigenvalues
    total = lam.sum()
    if total <= 0:
        return 0
    # tails[t] = sum_{j >= t} lam_j (0-based), tails[len] = 0
    tails = np.concatenate([np.cumsum(lam[::-1])[::-1], [0.0]])
    threshold = total / int(N)
    for t in range(1, lam.size + 1):
        if tails[t] <= threshold:
            return t
    return lam.size


def _row_spectrum(M):
    """Left singular vectors and squared singular values of M (descending).

    Works on whichever Gram matrix is smaller: ``M M^T`` (N x N) when N <= d,
    else ``M^T M`` (d x d), mapped back to row space.
    """
    N, d = M.shape
    if N <= d:
        spec = spectral_decomposition(M @ M.T)
        return spec.eigenvectors, spec.eigenvalues
    spec = spectral_decomposition(M.T @ M)
    lam = spec.eigenvalues
    keep = spec.positive_mask()
    U = np.zeros((N, lam.size))
    U[:, keep] = (M @ spec.eigenvectors[:, keep]) / np.sqrt(lam[keep])
    return U, lam


def numerical_rank(M):
    _, lam = _row_spectrum(np.asarray(M, dtype=np.float64))
    if lam.size == 0 or lam[0] <= 0:
        return 0
    return int(np.count_nonzero(lam > PINV_RTOL * lam[0]))


def leverage_scores(M, variant="plain", k=None, rho=None):
    """Row leverage scores of ``M``.

    variant ``"plain"``: m_i^T (M^T M)^+ m_i
    variant ``"truncated"``: same with M replaced by its rank-``k`` SVD truncation
    variant ``"ridge"``: m_i^T (M^T M + rho I)^{-1} m_i
    """
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] < 1:
        raise InvalidArgument("leverage_scores needs a non-empty 2-d matrix")
    U, lam = _row_spectrum(M)
    pos = lam > PINV_RTOL * lam[0] if lam.size and lam[0] > 0 else np.zeros(lam.shape, bool)
    U2 = U**2
    if variant == "plain":
        return U2[:, pos].sum(axis=1)
    if variant == "truncated":
        rank = int(pos.sum())
        if k is None or not 1 <= int(k) <= rank:
            raise InvalidArgument(f"truncation rank must lie in [1, rank={rank}], got {k}")
        return U2[:, : int(k)].sum(axis=1)
    if variant == "ridge":
        if rho is None or not rho > 0:
            raise InvalidArgument(f"ridge parameter must be positive, got {rho}")
        return U2 @ (lam / (lam + rho))
    raise InvalidArgument(f"unknown leverage variant {variant!r}")


def _truncated_pinv_root(sigma, k=None):
    """W with W W^T equal to the pseudoinverse of the rank-``k`` truncation."""
    spec = spectral_decomposition(sigma)
    pos = spec.positive_mask()
    if k is not None:
        if int(k) < 1:
            raise InvalidArgument("truncation k must be positive")
        pos &= np.arange(pos.size) < int(k)
    return spec.eigenvectors[:, pos] / np.sqrt(spec.eigenvalues[pos])


def truncated_pinv(sigma, k=None):
    """Pseudoinverse of the rank-``k`` truncation (``k=None``: full, with cutoff)."""
    W = _truncated_pinv_root(sigma, k)
    return W @ W.T


def trace_ratio(sigma_full, sigma_sub, k=None):
    """Variance terms of ``sigma_full @ <sigma_sub>_k^+``.

    ``trace`` is its trace. ``spectral`` is its largest eigenvalue, i.e. the
    2-norm of the symmetric form W^T sigma_full W with W W^T = <sigma_sub>_k^+;
    this is what sigma_full <= c sigma_sub bounds by c. ``operator_norm`` is
    the plain 2-norm of the (non-symmetric) product, which agrees with
    ``spectral`` when the two matrices commute but can exceed it otherwise.
    """
    A = _as_array(sigma_full)
    B = _as_array(sigma_sub)
    if A.shape != B.shape or A.ndim != 2:
        raise InvalidArgument(f"dimension mismatch: {A.shape} vs {B.shape}")
    W = _truncated_pinv_root(B, k)
    sym = W.T @ A @ W
    top = float(np.linalg.eigvalsh((sym + sym.T) / 2)[-1]) if sym.size else 0.0
    return {
        "trace": float(np.trace(sym)),
        "spectral": max(top, 0.0),
        "operator_norm": float(np.linalg.norm(A @ (W @ W.T), 2)),
    }
