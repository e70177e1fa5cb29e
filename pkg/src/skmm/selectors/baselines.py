"""Classical coreset baselines: uniform, herding, k-center greedy, adaptive
sampling and (truncated / ridge) leverage-score sampling."""

import numpy as np

from .. import _rng
from ..errors import InvalidArgument
from ..moments import leverage_scores
from .base import Selection
from .sampling import sequential_weighted_sample

# residual (squared) norms below this fraction of the largest initial one count as zero
ADAPTIVE_RTOL = 1e-12


def _check_budget(N, n):
    if not 1 <= int(n) <= N:
        raise InvalidArgument(f"budget must lie in [1, N={N}], got {n}")


def _features(F):
    F = np.asarray(F, dtype=np.float64)
    if F.ndim != 2 or F.shape[0] < 1:
        raise InvalidArgument("features must be a non-empty 2-d array")
    return F


def uniform_select(N, n, seed):
    """``n`` distinct indices uniformly at random."""
    _check_budget(N, n)
    rng = _rng.generator(seed, _rng.SAMPLE)
    return Selection(rng.choice(int(N), size=int(n), replace=False), "uniform", seed)


def herding_select(F, n):
    """Greedy herding toward the feature mean.

    Keeps w_t = w_{t-1} + mu - f_{i_t} (w_0 = mu) and picks the unchosen
    row maximizing <w, f_i>. Deterministic; ties go to the lowest index.
    """
    F = _features(F)
    N = F.shape[0]
    _check_budget(N, n)
    mu = F.mean(axis=0)
    w = mu.copy()
    chosen = np.zeros(N, dtype=bool)
    order = []
    for _ in range(int(n)):
        scores = F @ w
        scores[chosen] = -np.inf
        i = int(np.argmax(scores))
        order.append(i)
        chosen[i] = True
        w += mu - F[i]
    return Selection(np.asarray(order), "herding", None, metadata={"order": order})


def kcenter_select(F, n, seed):
    """Farthest-point (k-center greedy) selection from a seeded start."""
    F = _features(F)
    N = F.shape[0]
    _check_budget(N, n)
    start = int(_rng.generator(seed, _rng.SAMPLE).integers(N))
    sq = np.einsum("ij,ij->i", F, F)

    def dist_to(i):
        d2 = sq - 2.0 * (F @ F[i]) + sq[i]
        return np.sqrt(np.maximum(d2, 0.0))

    order = [start]
    chosen = np.zeros(N, dtype=bool)
    chosen[start] = True
    mind = dist_to(start)
    for _ in range(int(n) - 1):
        cand = np.where(chosen, -np.inf, mind)
        i = int(np.argmax(cand))
        order.append(i)
        chosen[i] = True
        mind = np.minimum(mind, dist_to(i))
    return Selection(np.asarray(order), "kcenter", seed, metadata={"order": order})


def _adaptive_pivots(K, n, rng):
    """Randomly pivoted Cholesky on the Gram matrix K = F F^T.

    The diagonal of the running Schur complement equals the squared norms of
    the rows after projecting out the span of the chosen rows, so this is
    adaptive sampling without touching the (possibly wide) feature matrix.
    Returns (order, residual_sq_norms, n_filled_uniformly).
    """
    N = K.shape[0]
    d = np.diag(K).copy()
    scale = d.max(initial=0.0)
    L = np.zeros((N, n))
    chosen = np.zeros(N, dtype=bool)
    order = []
    for t in range(n):
        w = np.where(chosen, 0.0, np.maximum(d, 0.0))
        w[w <= ADAPTIVE_RTOL * scale] = 0.0
        if not w.any():
            break
        i, _ = sequential_weighted_sample(w, 1, rng)
        i = int(i[0])
        g = K[:, i] - L[:, :t] @ L[i, :t]
        L[:, t] = g / np.sqrt(g[i])
        d -= L[:, t] ** 2
        d[i] = 0.0
        chosen[i] = True
        order.append(i)
    filled = n - len(order)
    if filled:
        rest = np.flatnonzero(~chosen)
        order.extend(int(i) for i in rng.choice(rest, size=filled, replace=False))
    return order, np.maximum(d, 0.0), filled


def adaptive_select(F, n, seed):
    """Adaptive (squared-residual-norm) sampling."""
    F = _features(F)
    N = F.shape[0]
    _check_budget(N, n)
    rng = _rng.generator(seed, _rng.SAMPLE)
    order, resid, filled = _adaptive_pivots(F @ F.T, int(n), rng)
    return Selection(
        np.asarray(order),
        "adaptive",
        seed,
        metadata={"order": order, "filled_uniformly": filled},
    )


def leverage_select(F, n, variant="truncated", seed=0, k=None, rho=None, scores=None):
    """Sample ``n`` rows without replacement proportional to leverage scores.

    ``scores`` may be passed in to reuse a precomputed score vector.
    """
    F = _features(F)
    N = F.shape[0]
    _check_budget(N, n)
    if scores is None:
        scores = leverage_scores(F, variant, k=k, rho=rho)
    rng = _rng.generator(seed, _rng.SAMPLE)
    picks, padded = sequential_weighted_sample(np.maximum(scores, 0.0), int(n), rng)
    name = {"truncated": "t-leverage", "ridge": "r-leverage"}.get(variant, "leverage")
    return Selection(
        picks,
        name,
        seed,
        metadata={"variant": variant, "k": k, "rho": rho, "padded": padded},
    )
