"""Threshold-aware evaluation of OOD detectors from raw scores.

The headline metric is AUTC, the area under the FPR- and FNR-vs-threshold
curves. The standard ranking metrics and a global-threshold benchmark
protocol sit alongside it.
"""

__version__ = "0.1.0"

from .classic import RateQuery, auroc, aupr, detection_error, pr_curve, rate_at_level, roc_curve
from .errors import (
    ConstraintUnreachable,
    DegenerateBounds,
    EmptyInput,
    MissingDataset,
    NonFiniteScore,
    OodEvalError,
    ParseError,
    ScoresOutOfRange,
    UnknownPreset,
)
from .protocol import ThresholdPolicy, evaluate_pair, run_benchmark, select_threshold
from .scores import Convention, DecisionRule, Kind, ScoreSet, normalize_scores, validate_scoreset
from .sweep import build_grid, confusion_at, threshold_curve
from .synth import SynthSpec, preset_pair, sample_scores
from .threshold_metrics import AutcResult, area_under_rate_curve, autc, crossing_threshold

__all__ = [
    "AutcResult", "ConstraintUnreachable", "Convention", "DecisionRule", "DegenerateBounds",
    "EmptyInput", "Kind", "MissingDataset", "NonFiniteScore", "OodEvalError", "ParseError",
    "RateQuery", "ScoreSet", "ScoresOutOfRange", "SynthSpec", "ThresholdPolicy", "UnknownPreset",
    "area_under_rate_curve", "auroc", "aupr", "autc", "build_grid", "confusion_at",
    "crossing_threshold", "detection_error", "evaluate_pair", "normalize_scores", "pr_curve",
    "preset_pair", "rate_at_level", "roc_curve", "run_benchmark", "sample_scores",
    "select_threshold", "threshold_curve", "validate_scoreset",
]
