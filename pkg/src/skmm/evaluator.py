"""Ridge regression on a coreset, cross-validated, plus variance-bias diagnostics."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from . import _rng
from .errors import InvalidArgument, NumericDomainError
from .moments import (
    intrinsic_dimension,
    second_moment,
    spectral_decomposition,
    trace_ratio,
)

DEFAULT_GRID = tuple(np.linspace(1e-2, 1e2, 100))
DEFAULT_FOLDS = 2
# slack on q_j / lambda_j >= 1 / c_S so that S = [N] passes at c_S = 1 despite rounding
RATIO_RTOL = 1e-10


@dataclass
class RidgeModel:
    theta: np.ndarray
    alpha: float
    solve_route: str


@dataclass
class EvalReport:
    empirical_risk: float
    chosen_alpha: float
    cv_grid: list
    diagnostics: Optional[dict] = None
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        out = {
            "empirical_risk": self.empirical_risk,
            "chosen_alpha": self.chosen_alpha,
            "cv_grid": [[float(a), float(l)] for a, l in self.cv_grid],
        }
        if self.diagnostics is not None:
            out["diagnostics"] = self.diagnostics
        out.update(self.extra)
        return out


def ridge_fit(X, y, alpha, route="auto"):
    """Minimize (1/n)||X theta - y||^2 + alpha ||theta||^2.

    ``route="primal"`` solves the r x r normal equations, ``"dual"`` the n x n
    kernel system theta = X^T (X X^T + n alpha I)^{-1} y. ``"auto"`` picks the
    smaller system.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or y.shape != (X.shape[0],) or X.shape[0] < 1:
        raise InvalidArgument(f"incompatible shapes X{X.shape}, y{y.shape}")
    if not alpha >= 0:
        raise InvalidArgument("alpha must be non-negative")
    n, r = X.shape
    if route == "auto":
        route = "primal" if r <= n else "dual"
    if alpha == 0 and (route == "dual" or n < r):
        raise NumericDomainError("alpha = 0 needs n >= r and the primal route")
    try:
        if route == "primal":
            A = X.T @ X / n + alpha * np.eye(r)
            theta = scipy.linalg.solve(A, X.T @ y / n, assume_a="pos")
        elif route == "dual":
            K = X @ X.T + n * alpha * np.eye(n)
            theta = X.T @ scipy.linalg.solve(K, y, assume_a="pos")
        else:
            raise InvalidArgument(f"unknown route {route!r}")
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise NumericDomainError(f"ridge system is singular: {exc}") from exc
    if not np.all(np.isfinite(theta)):
        raise NumericDomainError("ridge solution is not finite")
    return RidgeModel(theta, float(alpha), route)


def empirical_risk(model, X, y):
    theta = model.theta if isinstance(model, RidgeModel) else np.asarray(model)
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.shape[1] != theta.size or X.shape[0] != y.size:
        raise InvalidArgument("shape mismatch between model, X and y")
    resid = X @ theta - y
    return float(resid @ resid / y.size)


def _fold_losses(X_tr, y_tr, X_va, y_va, alphas):
    """Validation MSE for every alpha, reusing one eigendecomposition.

    With X_tr = U S W^T, the ridge prediction on X_va is
    X_va W diag(s / (s^2 + n alpha)) U^T y, computed via the smaller Gram matrix.
    """
    n = X_tr.shape[0]
    if n <= X_tr.shape[1]:
        d, U = np.linalg.eigh(X_tr @ X_tr.T)
        d = np.maximum(d, 0.0)
        B = (X_va @ X_tr.T) @ U
        c = U.T @ y_tr
        preds = B @ (c[:, None] / (d[:, None] + n * alphas[None, :]))
    else:
        d, W = np.linalg.eigh(X_tr.T @ X_tr / n)
        d = np.maximum(d, 0.0)
        B = X_va @ W
        c = W.T @ (X_tr.T @ y_tr) / n
        preds = B @ (c[:, None] / (d[:, None] + alphas[None, :]))
    resid = preds - y_va[:, None]
    return (resid**2).mean(axis=0)


def fold_partition(n, folds, seed):
    """Seeded permutation split into ``folds`` nearly equal parts (earlier folds get the remainder)."""
    perm = _rng.generator(seed, _rng.CV).permutation(n)
    return np.array_split(perm, folds)


def cv_grid_search(X, y, grid=DEFAULT_GRID, folds=DEFAULT_FOLDS, seed=0):
    """K-fold CV over ``grid``; returns the best alpha (ties to the smaller one)."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    alphas = np.asarray(list(grid), dtype=np.float64)
    if alphas.size == 0:
        raise InvalidArgument("alpha grid is empty")
    if np.any(alphas <= 0):
        raise InvalidArgument("grid values must be positive")
    if folds < 2:
        raise InvalidArgument("need at least 2 folds")
    n = X.shape[0]
    if n < folds:
        raise InvalidArgument(f"cannot split {n} samples into {folds} folds")
    parts = fold_partition(n, folds, seed)
    losses = np.zeros(alphas.size)
    for k, val in enumerate(parts):
        train = np.concatenate([p for j, p in enumerate(parts) if j != k])
        losses += _fold_losses(X[train], y[train], X[val], y[val], alphas)
    losses /= folds
    best = min(range(alphas.size), key=lambda i: (losses[i], alphas[i]))
    return {
        "best_alpha": float(alphas[best]),
        "cv_grid": [(float(a), float(l)) for a, l in zip(alphas, losses)],
    }


def fit_and_evaluate(X, y, indices, grid=DEFAULT_GRID, folds=DEFAULT_FOLDS, cv_seed=0):
    """CV-tune alpha on the coreset, refit on it, and score on the full data."""
    indices = np.asarray(indices, dtype=np.int64)
    X_S, y_S = X[indices], y[indices]
    cv = cv_grid_search(X_S, y_S, grid, folds, cv_seed)
    model = ridge_fit(X_S, y_S, cv["best_alpha"])
    return EvalReport(empirical_risk(model, X, y), cv["best_alpha"], cv["cv_grid"])


def tradeoff_diagnostics(G_sketch, indices, k=None, c_s_probe=1.0, features=None):
    """Variance-side quantities of the selected subset in the sketched space.

    Reports the trace and top eigenvalue of Sigma~ <Sigma~_S>_k^+ (plus the
    plain 2-norm of that product), gamma_S (the k-th
    eigenvalue of Sigma~_S), tr(Sigma) (from ``features`` when given,
    otherwise tr(Sigma~)), the intrinsic dimension of Sigma~, and whether the
    diagonal moment condition q_j >= lambda_j / c_S holds in Sigma~'s
    eigenbasis. Nothing here is asserted.
    """
    G_sketch = np.asarray(G_sketch, dtype=np.float64)
    indices = np.asarray(indices, dtype=np.int64)
    if indices.size < 1:
        raise InvalidArgument("need at least one selected index")
    N, m = G_sketch.shape
    sigma = second_moment(G_sketch)
    sigma_S = second_moment(G_sketch[indices])
    ratio = trace_ratio(sigma, sigma_S, k)
    spec = spectral_decomposition(sigma)
    spec_S = spectral_decomposition(sigma_S)
    kk = m if k is None else int(k)
    pos = spec.positive_mask()
    V = spec.eigenvectors
    q = np.einsum("ij,ik,kj->j", V, sigma_S.entries, V)
    ratios = q[pos] / spec.eigenvalues[pos]
    min_ratio = float(ratios.min()) if ratios.size else float("inf")
    if features is not None:
        F = np.asarray(features, dtype=np.float64)
        tr_sigma = float(np.einsum("ij,ij->", F, F) / F.shape[0])
    else:
        tr_sigma = float(np.trace(sigma.entries))
    return {
        "variance_term": ratio["trace"],
        "spectral_term": ratio["spectral"],
        "spectral_operator_norm": ratio["operator_norm"],
        "gamma_S": float(spec_S.eigenvalues[kk - 1]),
        "tr_sigma": tr_sigma,
        "intrinsic_dimension": intrinsic_dimension(spec, N),
        "min_moment_ratio": min_ratio,
        "relaxed_condition_holds": bool(min_ratio >= (1.0 - RATIO_RTOL) / c_s_probe),
        "k": k,
        "c_s_probe": c_s_probe,
    }
