import numpy as np

from .. import _rng
from ..errors import InvalidArgument

WEIGHTED = "weighted-without-replacement"
TOP_N = "top-n"
SAMPLING_MODES = (WEIGHTED, TOP_N)


def sequential_weighted_sample(weights, n, rng):
    """Draw ``n`` distinct indices, each step proportional to the remaining weights.

    Returns ``(indices_in_draw_order, n_padded)``. When fewer than ``n``
    indices carry positive weight, the remainder is drawn uniformly from the
    zero-weight indices and ``n_padded`` counts those draws.
    """
    w = np.array(weights, dtype=np.float64)
    N = w.size
    if not 0 <= n <= N:
        raise InvalidArgument(f"cannot draw {n} of {N} indices")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise InvalidArgument("sampling weights must be finite and non-negative")
    positive = int(np.count_nonzero(w > 0))
    picks = []
    for _ in range(min(n, positive)):
        cum = np.cumsum(w)
        u = rng.random() * cum[-1]
        # side="right" never lands on a zero-weight index
        i = int(np.searchsorted(cum, u, side="right"))
        if i >= N:  # u rounded up to the total
            i = int(np.flatnonzero(w > 0)[-1])
        picks.append(i)
        w[i] = 0.0
    padded = n - len(picks)
    if padded:
        zero = np.setdiff1d(np.arange(N), np.asarray(picks, dtype=np.int64))
        picks.extend(int(i) for i in rng.choice(zero, size=padded, replace=False))
    return np.asarray(picks, dtype=np.int64), padded


def top_n(weights, n):
    """The ``n`` largest weights; ties go to the lower index."""
    w = np.asarray(weights, dtype=np.float64)
    order = np.lexsort((np.arange(w.size), -w))
    return np.sort(order[:n])


def sample_without_replacement(s, n, seed, mode=WEIGHTED):
    """Turn continuous weights into ``n`` distinct indices.

    Returns ``(sorted_indices, n_padded)``.
    """
    weights = s.s if hasattr(s, "s") else np.asarray(s, dtype=np.float64)
    n = int(n)
    if not 1 <= n <= weights.size:
        raise InvalidArgument(f"cannot select {n} of {weights.size} indices")
    if mode == TOP_N:
        return top_n(weights, n), 0
    if mode != WEIGHTED:
        raise InvalidArgument(f"unknown sampling mode {mode!r}")
    picks, padded = sequential_weighted_sample(weights, n, _rng.generator(seed, _rng.SAMPLE))
    return np.sort(picks), padded
