"""Areas under the FPR- and FNR-vs-threshold curves, and their weighted mean (AUTC).

Both areas are integrated on one threshold grid, by default the distinct
scores of the pair plus 0 and 1. With ``exact_step`` integration the grid
only has to contain every jump, so any superset gives the same value. The
trapezoid rule does depend on the grid: extra points inside a flat stretch
of one curve change its area. Callers comparing several OOD sets against one
ID set pass a shared grid so that AUFPR comes out identical across them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scores import DEFAULT_CONVENTION, DEFAULT_RULE, Convention, DecisionRule, ScoreSet, require_unit_interval
from .sweep import ThresholdCurve, ThresholdGrid, threshold_curve

TRAPEZOID = "trapezoid"
EXACT_STEP = "exact_step"
INTEGRATIONS = (TRAPEZOID, EXACT_STEP)

# |FPR - FNR| gaps closer than this count as tied when locating the crossing
_CROSSING_TIE = 1e-12


@dataclass(frozen=True)
class AutcResult:
    aufpr: float
    aufnr: float
    autc: float
    weight_fpr: float = 0.5
    integration: str = TRAPEZOID


def area_under_rate_curve(curve: ThresholdCurve, which: str, integration: str = TRAPEZOID) -> float:
    """Integrate ``curve.fpr`` or ``curve.fnr`` over the threshold range [0, 1].

    ``"trapezoid"`` joins the sampled rates linearly. ``"exact_step"`` integrates
    the piecewise-constant rate function itself; this is exact whenever every
    jump of the rate lies on the grid (true for unique-scores grids).
    """
    if which not in ("fpr", "fnr"):
        raise ValueError(f"which must be 'fpr' or 'fnr', got {which!r}")
    y = curve.fpr if which == "fpr" else curve.fnr
    dt = np.diff(curve.thresholds)
    if integration == TRAPEZOID:
        return float(np.sum(0.5 * (y[:-1] + y[1:]) * dt))
    if integration == EXACT_STEP:
        # score > t is right-continuous in t (value held from the left grid point);
        # score >= t is left-continuous (value taken from the right grid point)
        held = y[:-1] if curve.rule is DecisionRule.STRICT_GREATER else y[1:]
        return float(np.sum(held * dt))
    raise ValueError(f"unknown integration {integration!r}")


def combine(aufpr: float, aufnr: float, weight_fpr: float = 0.5) -> float:
    """Weighted AUTC; ``weight_fpr=0.5`` gives the plain average."""
    if not 0.0 <= weight_fpr <= 1.0:
        raise ValueError(f"weight_fpr must lie in [0, 1], got {weight_fpr}")
    return weight_fpr * aufpr + (1.0 - weight_fpr) * aufnr


def autc(
    id: ScoreSet,
    ood: ScoreSet,
    weight_fpr: float = 0.5,
    integration: str = TRAPEZOID,
    rule: DecisionRule = DEFAULT_RULE,
    conv: Convention = DEFAULT_CONVENTION,
    grid: ThresholdGrid | None = None,
) -> AutcResult:
    """Area under the threshold curve for one ID/OOD pair (lower is better).

    Parameters
    ----------
    grid : ThresholdGrid, optional
        Integration grid. Defaults to the unique-scores grid of the pair; it
        must contain every distinct score for ``exact_step`` to be exact.

    Raises
    ------
    ScoresOutOfRange
        If any score lies outside [0, 1].
    """
    require_unit_interval(id, ood)
    if integration not in INTEGRATIONS:
        raise ValueError(f"unknown integration {integration!r}")
    curve = threshold_curve(id, ood, grid, rule, conv)
    aufpr = area_under_rate_curve(curve, "fpr", integration)
    aufnr = area_under_rate_curve(curve, "fnr", integration)
    return AutcResult(aufpr, aufnr, combine(aufpr, aufnr, weight_fpr), float(weight_fpr), integration)


def crossing_threshold(curve: ThresholdCurve) -> tuple[float, float, float]:
    """Grid threshold where the FPR and FNR curves come closest.

    Empirical curves are staircases and rarely cross exactly, so ties are
    broken by the smaller of ``max(FPR, FNR)`` and then by the smaller
    threshold. Returns ``(threshold, fpr, fnr)``.
    """
    fpr, fnr, t = curve.fpr, curve.fnr, curve.thresholds
    gap = np.abs(fpr - fnr)
    gap_key = np.floor(gap / _CROSSING_TIE)
    order = np.lexsort((t, np.maximum(fpr, fnr), gap_key))
    i = int(order[0])
    return float(t[i]), float(fpr[i]), float(fnr[i])
