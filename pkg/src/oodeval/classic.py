"""Standard OOD detection metrics: AUROC, AUPR-in/out, rates at a fixed level,
and best detection error.

AUROC and AUPR only look at the ranking of scores and accept any finite
values. The threshold-based metrics sweep the unique-scores grid and need
scores in [0, 1].
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConstraintUnreachable
from .scores import DEFAULT_CONVENTION, DEFAULT_RULE, Convention, DecisionRule, ScoreSet
from .sweep import pair_groups, union_grid_counts


class RateQuery(enum.Enum):
    FPR_AT_TPR = "fpr_at_tpr"
    TNR_AT_TPR = "tnr_at_tpr"
    FNR_AT_TNR = "fnr_at_tnr"


@dataclass(frozen=True, eq=False)
class RocCurve:
    """ROC points as an ``(k, 2)`` array of ``(fpr, tpr)``, from (0,0) to (1,1)."""

    points: np.ndarray


@dataclass(frozen=True, eq=False)
class PrCurve:
    """PR points as an ``(k, 2)`` array of ``(recall, precision)``.

    The first point is ``(0, 1)``; recall is non-decreasing.
    """

    points: np.ndarray
    positive: str


def auroc(id: ScoreSet, ood: ScoreSet, conv: Convention = DEFAULT_CONVENTION) -> float:
    """Probability that an OOD score outranks an ID score, ties counting one half.

    Computed from an integer rank-sum in a single merge pass over the sorted
    scores. The value does not depend on ``conv``.
    """
    u2 = kernels.mann_whitney_u2(id.sorted, ood.sorted)
    return u2 / (2 * len(id) * len(ood))


def roc_curve(id: ScoreSet, ood: ScoreSet) -> RocCurve:
    _, c_id, c_ood = pair_groups(id, ood)
    fpr = np.concatenate([[0.0], np.cumsum(c_id[::-1]) / len(id)])
    tpr = np.concatenate([[0.0], np.cumsum(c_ood[::-1]) / len(ood)])
    return RocCurve(np.column_stack([fpr, tpr]))


def pr_curve(id: ScoreSet, ood: ScoreSet, positive: str = "out") -> PrCurve:
    """Empirical precision-recall curve with one point per distinct score.

    ``positive="out"`` ranks by descending OOD score with OOD as the positive
    class; ``positive="in"`` ranks by ascending score with ID as positive.
    """
    _, c_id, c_ood = pair_groups(id, ood)
    if positive == "out":
        tp, fp, n_pos = np.cumsum(c_ood[::-1]), np.cumsum(c_id[::-1]), len(ood)
    elif positive == "in":
        tp, fp, n_pos = np.cumsum(c_id), np.cumsum(c_ood), len(id)
    else:
        raise ValueError(f"positive must be 'in' or 'out', got {positive!r}")
    recall = np.concatenate([[0.0], tp / n_pos])
    precision = np.concatenate([[1.0], tp / (tp + fp)])
    return PrCurve(np.column_stack([recall, precision]), positive)


def aupr(id: ScoreSet, ood: ScoreSet, positive: str = "out", interpolation: str = "trapezoid") -> float:
    """Area under the precision-recall curve.

    ``interpolation="trapezoid"`` integrates the PR points linearly;
    ``"step"`` is the average-precision sum ``sum(dR * P)``.
    """
    pts = pr_curve(id, ood, positive).points
    recall, precision = pts[:, 0], pts[:, 1]
    if interpolation == "trapezoid":
        return float(np.trapezoid(precision, recall))
    if interpolation == "step":
        return float(np.sum(np.diff(recall) * precision[1:]))
    raise ValueError(f"unknown interpolation {interpolation!r}")


def _operating_rates(id, ood, rule):
    grid, id_flag, ood_flag = union_grid_counts(id, ood, rule)
    grid = grid.thresholds
    n, m = len(id), len(ood)
    return grid, {
        "fpr": id_flag / n,
        "tnr": (n - id_flag) / n,
        "tpr": ood_flag / m,
        "fnr": (m - ood_flag) / m,
    }


def rate_at_level(
    id: ScoreSet,
    ood: ScoreSet,
    query: RateQuery | str,
    level: float,
    rule: DecisionRule = DEFAULT_RULE,
) -> tuple[float, float]:
    """Best rate subject to a minimum rate constraint, with OOD as positive.

    Returns ``(value, threshold)``, where ``threshold`` is the smallest grid
    threshold that achieves the best value. No interpolation on the ROC.
    """
    query = RateQuery(query)
    if not 0.0 < level <= 1.0:
        raise ValueError(f"level must lie in (0, 1], got {level}")
    grid, r = _operating_rates(id, ood, rule)
    if query is RateQuery.FPR_AT_TPR:
        feasible, target, best = r["tpr"] >= level, r["fpr"], np.min
    elif query is RateQuery.TNR_AT_TPR:
        feasible, target, best = r["tpr"] >= level, r["tnr"], np.max
    else:
        feasible, target, best = r["tnr"] >= level, r["fnr"], np.min
    if not feasible.any():
        raise ConstraintUnreachable(f"no threshold reaches {query.value} level {level}")
    value = best(target[feasible])
    idx = int(np.flatnonzero(feasible & (target == value))[0])
    return float(value), float(grid[idx])


def detection_error(id: ScoreSet, ood: ScoreSet, rule: DecisionRule = DEFAULT_RULE) -> tuple[float, float]:
    """Lowest equal-prior error ``(FPR + FNR) / 2`` and the smallest threshold reaching it."""
    grid, r = _operating_rates(id, ood, rule)
    err = 0.5 * (r["fpr"] + r["fnr"])
    idx = int(np.argmin(err))
    return float(err[idx]), float(grid[idx])


def fpr95(id, ood, level=0.95, rule=DEFAULT_RULE):
    """FPR at ``level`` TPR."""
    return rate_at_level(id, ood, RateQuery.FPR_AT_TPR, level, rule)[0]


def fnr95(id, ood, level=0.95, rule=DEFAULT_RULE):
    """FNR at ``level`` TNR."""
    return rate_at_level(id, ood, RateQuery.FNR_AT_TNR, level, rule)[0]
