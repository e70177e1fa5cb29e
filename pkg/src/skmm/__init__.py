"""Coreset selection for linear regression by sketched moment matching (SkMM).

The pipeline is: sketch the gradient/feature matrix down to a few columns,
optimize relaxed selection weights so the coreset's sketched second moment
dominates the full one, sample a subset from the weights, then fit ridge
regression on the subset and score it on the full data.
"""

from .errors import InvalidArgument, NumericDomainError
from .evaluator import EvalReport, RidgeModel, cv_grid_search, empirical_risk, fit_and_evaluate, ridge_fit
from .moments import (
    intrinsic_dimension,
    leverage_scores,
    second_moment,
    spectral_decomposition,
    trace_ratio,
    truncated_pinv,
)
from .selectors import METHODS, Selection, SkmmConfig, run_selector, skmm_select
from .sketch import SketchOperator, apply_sketch, build_gaussian_sketch, build_sketch, build_sparse_sign_sketch
from .synth import GmmSpec, gmm_generate

__version__ = "0.1.0"
