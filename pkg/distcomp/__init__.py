"""distcomp - comparison functions of constant-curvature model planes."""

from .comparison_engine import equivalence_audit, estimate_threshold
from .distance_like import SampledFunction, is_distance_like
from .fitting import ChordSpec, fit
from .inequality_checker import check, classify, residual_series
from .model_spaces import ComparisonParams, Curvature, eval_g

__version__ = "0.1.0"
__all__ = [
    "ChordSpec",
    "ComparisonParams",
    "Curvature",
    "SampledFunction",
    "check",
    "classify",
    "equivalence_audit",
    "estimate_threshold",
    "eval_g",
    "fit",
    "is_distance_like",
    "residual_series",
]
