"""Independent reference computations used by the unit and acceptance tests."""

import itertools

import numpy as np


def brute_force_projection(v, cap):
    """Capped-simplex projection by enumerating every (lower, free, upper) pattern."""
    best, best_d = None, np.inf
    for pattern in itertools.product(range(3), repeat=v.size):
        pattern = np.array(pattern)
        free, upper = pattern == 1, pattern == 2
        s = np.where(upper, cap, 0.0)
        rest = 1.0 - upper.sum() * cap
        if free.any():
            tau = (v[free].sum() - rest) / free.sum()
            s[free] = v[free] - tau
        elif abs(rest) > 1e-12:
            continue
        if s.min() < -1e-12 or s.max() > cap + 1e-12:
            continue
        d = np.sum((s - v) ** 2)
        if d < best_d:
            best, best_d = s, d
    return best


def central_difference(f, s, h=1e-6):
    out = np.empty_like(s)
    for i in range(s.size):
        e = np.zeros_like(s)
        e[i] = h
        out[i] = (f(s + e) - f(s - e)) / (2 * h)
    return out


def direct_intrinsic_dimension(sigma, N):
    """min t in {1..d} with sum of eigenvalues beyond t <= trace / N, summed term by term."""
    lam = np.maximum(np.sort(np.linalg.eigvalsh(sigma))[::-1], 0)
    total = lam.sum()
    if total <= 0:
        return 0
    for t in range(1, lam.size + 1):
        if lam[t:].sum() <= total / N:
            return t
    return lam.size


def explicit_leverage(M, rho=None):
    """Leverage scores through the explicit d x d (pseudo)inverse."""
    A = M.T @ M
    inv = np.linalg.pinv(A) if rho is None else np.linalg.inv(A + rho * np.eye(A.shape[0]))
    return np.einsum("ij,jk,ik->i", M, inv, M)
