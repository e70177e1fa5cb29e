import numpy as np

from ..errors import InvalidArgument
from .base import SelectionWeights


def _clipped_sum(v, tau, cap):
    return np.clip(v - tau, 0.0, cap).sum()


def project_capped_simplex(v, cap):
    """Euclidean projection of ``v`` onto {s : sum(s) = 1, 0 <= s_i <= cap}.

    The projection has the form s_i = clip(v_i - tau, 0, cap). The clipped sum
    is piecewise linear and non-increasing in tau with kinks at v_i and
    v_i - cap, so we bisect over the sorted kinks and interpolate inside the
    bracketing segment. O(N log N).
    """
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise InvalidArgument("projection input must be a non-empty vector")
    if not np.all(np.isfinite(v)):
        raise InvalidArgument("projection input must be finite")
    N = v.size
    if not cap > 0 or N * cap < 1.0 - 1e-12:
        raise InvalidArgument(f"infeasible cap {cap!r} for N={N}")
    budget = int(round(1.0 / cap))
    if N * cap <= 1.0 + 1e-12:
        # only one feasible point
        return SelectionWeights(np.full(N, 1.0 / N), budget)

    kinks = np.sort(np.concatenate([v - cap, v]))
    # f(kinks[0]) = N * cap > 1 and f(kinks[-1]) = 0 < 1
    lo, hi = 0, kinks.size - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _clipped_sum(v, kinks[mid], cap) >= 1.0:
            lo = mid
        else:
            hi = mid
    t_lo, t_hi = kinks[lo], kinks[hi]
    f_lo, f_hi = _clipped_sum(v, t_lo, cap), _clipped_sum(v, t_hi, cap)
    if f_lo == f_hi:
        tau = t_lo
    else:
        tau = t_lo + (f_lo - 1.0) * (t_hi - t_lo) / (f_lo - f_hi)
    s = np.clip(v - tau, 0.0, cap)
    return SelectionWeights(s, budget)
