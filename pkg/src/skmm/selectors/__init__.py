"""Coreset selectors. :func:`run_selector` dispatches by method name."""

from dataclasses import fields

from ..errors import InvalidArgument
from .base import Selection, SelectionWeights
from .baselines import (
    adaptive_select,
    herding_select,
    kcenter_select,
    leverage_select,
    uniform_select,
)
from .projection import project_capped_simplex
from .sampling import sample_without_replacement
from .skmm import (
    SkmmConfig,
    skmm_gradient,
    skmm_objective,
    skmm_optimize,
    skmm_select,
)

METHODS = ("uniform", "herding", "kcenter", "adaptive", "leverage", "t-leverage", "r-leverage", "skmm")

# defaults used in the GMM benchmark
DEFAULT_TRUNCATION = 32
DEFAULT_RIDGE = 1e3


def skmm_config_from(params):
    known = {f.name for f in fields(SkmmConfig)}
    unknown = set(params) - known
    if unknown:
        raise InvalidArgument(f"unknown SkMM options: {sorted(unknown)}")
    return SkmmConfig(**params)


def resolved_params(method, params=None):
    """Method parameters with defaults filled in, as recorded in outputs."""
    params = dict(params or {})
    if method == "skmm":
        return skmm_config_from(params).to_dict()
    if method == "t-leverage":
        params.setdefault("k", DEFAULT_TRUNCATION)
    elif method == "r-leverage":
        params.setdefault("rho", DEFAULT_RIDGE)
    allowed = {"t-leverage": {"k"}, "r-leverage": {"rho"}}.get(method, set())
    unknown = set(params) - allowed - {"scores"}
    if unknown:
        raise InvalidArgument(f"unknown options for {method}: {sorted(unknown)}")
    return params


def run_selector(method, F, n, seed=0, params=None):
    """Select ``n`` rows of ``F`` with the named method."""
    if method not in METHODS:
        raise InvalidArgument(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    params = resolved_params(method, params)
    if method == "uniform":
        return uniform_select(len(F), n, seed)
    if method == "herding":
        return herding_select(F, n)
    if method == "kcenter":
        return kcenter_select(F, n, seed)
    if method == "adaptive":
        return adaptive_select(F, n, seed)
    if method == "leverage":
        return leverage_select(F, n, "plain", seed, scores=params.get("scores"))
    if method == "t-leverage":
        return leverage_select(F, n, "truncated", seed, k=params["k"], scores=params.get("scores"))
    if method == "r-leverage":
        return leverage_select(F, n, "ridge", seed, rho=params["rho"], scores=params.get("scores"))
    return skmm_select(F, n, skmm_config_from(params), seed)


__all__ = [
    "METHODS",
    "Selection",
    "SelectionWeights",
    "SkmmConfig",
    "adaptive_select",
    "herding_select",
    "kcenter_select",
    "leverage_select",
    "project_capped_simplex",
    "run_selector",
    "sample_without_replacement",
    "skmm_gradient",
    "skmm_objective",
    "skmm_optimize",
    "skmm_select",
    "uniform_select",
]
