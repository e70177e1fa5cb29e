"""Sketchy moment matching.

Given sketched gradients G~ (N x m) with moment Sigma~ = G~^T G~ / N =
V diag(lambda) V^T, SkMM looks for selection weights s on the capped simplex
whose weighted moment G~^T diag(s) G~ dominates Sigma~ / c_S along every
eigendirection v_j:

    min_s  sum_j min_{gamma_j >= 1/c_S} (q_j(s) - gamma_j lambda_j)^2,
    q_j(s) = sum_i s_i (g~_i . v_j)^2.

The inner minimum has the closed form max(0, lambda_j / c_S - q_j)^2 for
lambda_j > 0 and q_j^2 for lambda_j = 0, so the objective depends on s only.
It is convex in s.
"""

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .. import _rng
from ..errors import InvalidArgument, NumericDomainError
from ..moments import second_moment, spectral_decomposition
from ..sketch import apply_sketch, build_sketch
from .base import Selection, SelectionWeights
from .projection import project_capped_simplex
from .sampling import SAMPLING_MODES, WEIGHTED, sample_without_replacement

OPTIMIZERS = ("adam", "plain-pgd")


@dataclass
class SkmmConfig:
    """Hyperparameters of the SkMM optimizer.

    ``learning_rate=None`` means "auto": 1/L for plain PGD, where L bounds the
    Lipschitz constant of the gradient, and 0.1/n for Adam.

    Adam is kept for completeness, but with the inner gamma eliminated every
    gradient coordinate has the same sign, so Adam's normalized step is a
    near-constant shift that the simplex projection removes again; from the
    vertex initialization it barely moves. Plain PGD is the default.
    """

    m: int = 32
    c_s: float = 0.999
    iterations: int = 10_000
    learning_rate: Optional[float] = None
    optimizer: str = "plain-pgd"
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    keep_best: bool = True
    sampling_mode: str = WEIGHTED
    drop_null_eigendirections: bool = False
    sketch_kind: str = "gaussian"
    sketch_sparsity: int = 8
    trace_every: int = 100
    check_feasibility: bool = False

    def validate(self, N, n):
        if not self.m < n <= N:
            raise InvalidArgument(f"SkMM needs m < n <= N, got m={self.m}, n={n}, N={N}")
        if not n / N - 1e-12 <= self.c_s <= 1.0:
            raise InvalidArgument(f"c_S must lie in [n/N, 1] = [{n / N:.4g}, 1], got {self.c_s}")
        if self.optimizer not in OPTIMIZERS:
            raise InvalidArgument(f"unknown optimizer {self.optimizer!r}")
        if self.sampling_mode not in SAMPLING_MODES:
            raise InvalidArgument(f"unknown sampling mode {self.sampling_mode!r}")
        if self.iterations < 0:
            raise InvalidArgument("iterations must be non-negative")
        if self.learning_rate is not None and not self.learning_rate > 0:
            raise InvalidArgument("learning rate must be positive")

    def to_dict(self):
        return asdict(self)


class MomentMatching:
    """Objective and gradient for fixed (G~, spectrum, c_S).

    Precomputes P[i, j] = (g~_i . v_j)^2 so that q = P^T s, making every
    evaluation O(N m).
    """

    def __init__(self, G_sketch, spec, c_s, drop_null=False):
        G_sketch = np.asarray(G_sketch, dtype=np.float64)
        V = spec.eigenvectors
        if G_sketch.ndim != 2 or G_sketch.shape[1] != V.shape[0]:
            raise InvalidArgument(
                f"dimension mismatch: sketch has {G_sketch.shape[-1]} columns, "
                f"spectrum has dimension {V.shape[0]}"
            )
        if not c_s > 0:
            raise InvalidArgument("c_S must be positive")
        self.P = (G_sketch @ V) ** 2
        self.lam = spec.eigenvalues
        self.c_s = float(c_s)
        self.positive = spec.positive_mask()
        self.null = np.zeros_like(self.positive) if drop_null else ~self.positive
        self.target = np.where(self.positive, self.lam / self.c_s, 0.0)

    def terms(self, s):
        q = self.P.T @ s
        deficit = np.where(self.positive, np.maximum(0.0, self.target - q), 0.0)
        null_q = np.where(self.null, q, 0.0)
        return q, deficit, null_q

    def value(self, s):
        _, deficit, null_q = self.terms(s)
        return float(deficit @ deficit + null_q @ null_q)

    def gradient(self, s):
        _, deficit, null_q = self.terms(s)
        return self.P @ (2.0 * (null_q - deficit))

    def gamma(self, s):
        q = self.P.T @ s
        ratio = np.divide(q, self.lam, out=np.zeros_like(q), where=self.positive)
        return np.where(self.positive, np.maximum(1.0 / self.c_s, ratio), 1.0 / self.c_s)

    def lipschitz(self):
        # Hessian is 2 P_A^T P_A over the active directions; bound with all of them
        return 2.0 * np.linalg.norm(self.P, 2) ** 2


def _weights(s):
    return s.s if isinstance(s, SelectionWeights) else np.asarray(s, dtype=np.float64)


def skmm_objective(s, G_sketch, spec, c_s, drop_null=False):
    """Objective value, per-direction q_j and the optimal gamma_j."""
    s = _weights(s)
    mm = MomentMatching(G_sketch, spec, c_s, drop_null)
    if s.shape != (mm.P.shape[0],):
        raise InvalidArgument("weight vector length does not match the number of rows")
    q = mm.P.T @ s
    return {"value": mm.value(s), "q": q, "gamma": mm.gamma(s)}


def skmm_gradient(s, G_sketch, spec, c_s, drop_null=False):
    s = _weights(s)
    mm = MomentMatching(G_sketch, spec, c_s, drop_null)
    if s.shape != (mm.P.shape[0],):
        raise InvalidArgument("weight vector length does not match the number of rows")
    return mm.gradient(s)


def _init_weights(N, n, seed):
    rng = _rng.generator(seed, _rng.INIT)
    s = np.zeros(N)
    s[rng.choice(N, size=n, replace=False)] = 1.0 / n
    return s


def skmm_optimize(G_sketch, n, cfg=None, seed=0):
    """Run projected Adam / PGD on the moment-matching objective and sample S."""
    cfg = cfg or SkmmConfig()
    G_sketch = np.asarray(G_sketch, dtype=np.float64)
    N, m = G_sketch.shape
    n = int(n)
    if m != cfg.m:
        raise InvalidArgument(f"sketch has {m} columns but config says m={cfg.m}")
    cfg.validate(N, n)

    spec = spectral_decomposition(second_moment(G_sketch))
    mm = MomentMatching(G_sketch, spec, cfg.c_s, cfg.drop_null_eigendirections)
    cap = 1.0 / n

    # overflow is detected explicitly below and reported as NumericDomainError
    with np.errstate(over="ignore", invalid="ignore"):
        s = _init_weights(N, n, seed)
        value = mm.value(s)
        if not np.isfinite(value):
            raise NumericDomainError("objective overflows at the initial point; rescale the gradients")
        best_s, best_value, best_iter = s.copy(), value, 0
        trace = [(0, value)]

        lr = cfg.learning_rate
        if lr is None:
            lr = 1.0 / mm.lipschitz() if cfg.optimizer == "plain-pgd" else 0.1 * cap
        m1 = np.zeros(N)
        m2 = np.zeros(N)
        b1, b2 = cfg.adam_beta1, cfg.adam_beta2
        for t in range(1, cfg.iterations + 1):
            g = mm.gradient(s)
            if cfg.optimizer == "adam":
                m1 = b1 * m1 + (1 - b1) * g
                m2 = b2 * m2 + (1 - b2) * g * g
                step = (m1 / (1 - b1**t)) / (np.sqrt(m2 / (1 - b2**t)) + cfg.adam_eps)
            else:
                step = g
            v = s - lr * step
            if not np.all(np.isfinite(v)):
                raise NumericDomainError(f"non-finite iterate at step {t}; learning rate too large?")
            s = project_capped_simplex(v, cap).s
            if cfg.check_feasibility:
                SelectionWeights(s, n).check()
            value = mm.value(s)
            if not np.isfinite(value):
                raise NumericDomainError(f"non-finite objective at step {t}; learning rate too large?")
            if value < best_value:
                best_s, best_value, best_iter = s.copy(), value, t
            if cfg.trace_every and (t % cfg.trace_every == 0 or t == cfg.iterations):
                trace.append((t, value))

    final_s = best_s if cfg.keep_best else s
    final_value = best_value if cfg.keep_best else value
    indices, padded = sample_without_replacement(final_s, n, seed, cfg.sampling_mode)
    weights = SelectionWeights(final_s, n)
    return Selection(
        indices=indices,
        method="skmm",
        seed=seed,
        objective_trace=trace,
        weights=weights,
        metadata={
            "sampling_mode": cfg.sampling_mode,
            "padded": padded,
            "final_objective": final_value,
            "best_iteration": best_iter if cfg.keep_best else cfg.iterations,
            "learning_rate": lr,
        },
    )


def skmm_select(G, n, cfg=None, seed=0):
    """Full pipeline on raw (N x r) gradients: sketch with ``cfg.m`` columns, then optimize."""
    cfg = cfg or SkmmConfig()
    G = np.asarray(G, dtype=np.float64)
    op = build_sketch(cfg.sketch_kind, G.shape[1], cfg.m, seed, cfg.sketch_sparsity)
    selection = skmm_optimize(apply_sketch(G, op), n, cfg, seed)
    selection.metadata["sketch"] = op.describe()
    return selection
