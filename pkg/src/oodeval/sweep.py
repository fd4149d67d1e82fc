"""Threshold grids and confusion rates as functions of the threshold."""

from __future__ import annotations

import threading
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from . import kernels
from .scores import (
    DEFAULT_CONVENTION,
    DEFAULT_RULE,
    Convention,
    DecisionRule,
    ScoreSet,
    require_unit_interval,
)

UNIQUE_SCORES = "unique_scores"
UNIFORM = "uniform"


@dataclass(frozen=True, eq=False)
class ThresholdGrid:
    """Strictly increasing thresholds in [0, 1] starting at 0 and ending at 1."""

    thresholds: np.ndarray
    origin: str = UNIQUE_SCORES

    def __len__(self):
        return self.thresholds.shape[0]

    @property
    def max_gap(self) -> float:
        return float(np.max(np.diff(self.thresholds)))


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int


@dataclass(frozen=True, eq=False)
class ThresholdCurve:
    """FPR(t) and FNR(t) sampled on a grid.

    Rates are always fractions of a non-empty class, so no 0/0 case exists.
    """

    grid: ThresholdGrid
    fpr: np.ndarray
    fnr: np.ndarray
    convention: Convention = DEFAULT_CONVENTION
    rule: DecisionRule = DEFAULT_RULE

    @property
    def thresholds(self) -> np.ndarray:
        return self.grid.thresholds


def _readonly(a):
    a.setflags(write=False)
    return a


_PAIR_CACHE: "OrderedDict[tuple, tuple]" = OrderedDict()
_PAIR_CACHE_SIZE = 4
_PAIR_LOCK = threading.Lock()


def pair_groups(a: ScoreSet, b: ScoreSet):
    """Distinct values of ``a ∪ b`` with per-set multiplicities.

    Several metrics for the same pair need this merge. The last few results
    are cached. Each entry keeps its input arrays alive, so the identity-based
    key cannot be reused by another array.
    """
    sa, sb = a.sorted, b.sorted
    key = (id(sa), id(sb), kernels.backend_name())
    with _PAIR_LOCK:
        hit = _PAIR_CACHE.get(key)
        if hit is not None and hit[0] is sa and hit[1] is sb:
            _PAIR_CACHE.move_to_end(key)
            return hit[2]
    groups = kernels.merge_groups(sa, sb)
    for arr in groups:
        arr.setflags(write=False)
    with _PAIR_LOCK:
        _PAIR_CACHE[key] = (sa, sb, groups)
        while len(_PAIR_CACHE) > _PAIR_CACHE_SIZE:
            _PAIR_CACHE.popitem(last=False)
    return groups


def grid_from_values(values, origin: str = UNIQUE_SCORES) -> ThresholdGrid:
    """Wrap sorted distinct values in [0, 1] as a grid, adding the 0/1 endpoints."""
    values = np.asarray(values, dtype=np.float64)
    parts = []
    if values.size == 0 or values[0] > 0.0:
        parts.append(np.zeros(1))
    parts.append(values)
    if values.size == 0 or values[-1] < 1.0:
        parts.append(np.ones(1))
    return ThresholdGrid(_readonly(np.concatenate(parts)), origin)


def class_grid(s: ScoreSet) -> ThresholdGrid:
    """Unique-scores grid of a single score set."""
    require_unit_interval(s)
    return grid_from_values(s.distinct)


def build_grid(id: ScoreSet, ood: ScoreSet, origin: str = UNIQUE_SCORES, n: int | None = None) -> ThresholdGrid:
    """Threshold grid for an ID/OOD pair.

    ``origin="unique_scores"`` uses every distinct score of either set (plus
    0 and 1), which captures each jump of the rate curves exactly.
    ``origin="uniform"`` gives ``n`` evenly spaced thresholds on [0, 1].
    """
    if origin == UNIFORM:
        if n is None or n < 2:
            raise ValueError("uniform grid needs n >= 2")
        return ThresholdGrid(_readonly(np.linspace(0.0, 1.0, int(n))), f"uniform({int(n)})")
    if origin != UNIQUE_SCORES:
        raise ValueError(f"unknown grid origin {origin!r}")
    require_unit_interval(id, ood)
    values, _, _ = pair_groups(id, ood)
    return grid_from_values(values)


def flagged_ood(sorted_scores: np.ndarray, thresholds, rule: DecisionRule) -> np.ndarray:
    """Number of scores flagged OOD at each threshold."""
    t = np.atleast_1d(np.asarray(thresholds, dtype=np.float64))
    below = kernels.count_below(sorted_scores, t, rule is DecisionRule.STRICT_GREATER)
    return sorted_scores.shape[0] - below


def confusion_at(
    id: ScoreSet,
    ood: ScoreSet,
    t: float,
    rule: DecisionRule = DEFAULT_RULE,
    conv: Convention = DEFAULT_CONVENTION,
) -> ConfusionCounts:
    """Confusion counts at a single threshold ``t``."""
    n, m = len(id), len(ood)
    id_flag = int(flagged_ood(id.sorted, t, rule)[0])
    ood_flag = int(flagged_ood(ood.sorted, t, rule)[0])
    if conv is Convention.OOD_POSITIVE:
        return ConfusionCounts(tp=ood_flag, fp=id_flag, tn=n - id_flag, fn=m - ood_flag)
    return ConfusionCounts(tp=n - id_flag, fp=m - ood_flag, tn=ood_flag, fn=id_flag)


def rates_at(id: ScoreSet, ood: ScoreSet, thresholds, rule=DEFAULT_RULE, conv=DEFAULT_CONVENTION):
    """(fpr, fnr) arrays at arbitrary thresholds, via one sorted scan per class."""
    n, m = len(id), len(ood)
    id_frac = flagged_ood(id.sorted, thresholds, rule) / n
    ood_miss = (m - flagged_ood(ood.sorted, thresholds, rule)) / m
    if conv is Convention.OOD_POSITIVE:
        return id_frac, ood_miss
    return ood_miss, id_frac


def union_grid_counts(id: ScoreSet, ood: ScoreSet, rule: DecisionRule = DEFAULT_RULE):
    """Unique-scores grid of a pair with the number of each set flagged OOD at every point.

    Read off the cached merge by cumulative sums, so no per-threshold search
    is needed. Returns ``(grid, id_flagged, ood_flagged)``.
    """
    require_unit_interval(id, ood)
    values, c_id, c_ood = pair_groups(id, ood)
    grid = grid_from_values(values)
    counts = []
    for c, total in ((c_id, len(id)), (c_ood, len(ood))):
        at_or_below = np.cumsum(c)
        below = at_or_below if rule is DecisionRule.STRICT_GREATER else at_or_below - c
        flagged = total - below
        # the 0 and 1 endpoints, when added, lie below or above every score
        if values.size == 0 or values[0] > 0.0:
            flagged = np.concatenate([[total], flagged])
        if values.size == 0 or values[-1] < 1.0:
            flagged = np.concatenate([flagged, [0]])
        counts.append(flagged.astype(np.int64))
    return grid, counts[0], counts[1]


def threshold_curve(
    id: ScoreSet,
    ood: ScoreSet,
    grid: ThresholdGrid | None = None,
    rule: DecisionRule = DEFAULT_RULE,
    conv: Convention = DEFAULT_CONVENTION,
) -> ThresholdCurve:
    """FPR and FNR at every grid threshold (default grid: unique scores)."""
    if grid is None:
        grid, id_flag, ood_flag = union_grid_counts(id, ood, rule)
        id_frac, ood_miss = id_flag / len(id), (len(ood) - ood_flag) / len(ood)
        fpr, fnr = (id_frac, ood_miss) if conv is Convention.OOD_POSITIVE else (ood_miss, id_frac)
    else:
        fpr, fnr = rates_at(id, ood, grid.thresholds, rule, conv)
    return ThresholdCurve(grid, _readonly(fpr), _readonly(fnr), conv, rule)
