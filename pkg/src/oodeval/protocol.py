"""Threshold policies and the benchmark protocol with one global threshold.

A benchmark has one ID set, an optional validation OOD set, and several test
OOD sets. The global thresholds (``@95TNR`` from ID scores only and ``@val``
from the validation pair) are resolved once and applied unchanged to every
test pair. ``@test`` is resolved per test pair as a reference point.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import classic, kernels
from .errors import MissingDataset
from .scores import DEFAULT_CONVENTION, DEFAULT_RULE, Convention, DecisionRule, ScoreSet, require_unit_interval
from .sweep import class_grid, flagged_ood, grid_from_values, rates_at, threshold_curve
from .threshold_metrics import TRAPEZOID, autc, crossing_threshold

AT_TEST = "at_test"
AT_TNR = "at_tnr"
AT_VAL = "at_val"
FIXED = "fixed"


@dataclass(frozen=True)
class ThresholdPolicy:
    """How a decision threshold is chosen.

    ``value`` holds the TNR level for ``at_tnr`` and the threshold for
    ``fixed``; it is ``None`` otherwise.
    """

    kind: str
    value: float | None = None

    def __post_init__(self):
        if self.kind == AT_TNR:
            if self.value is None or not 0.0 < self.value < 1.0:
                raise ValueError(f"TNR level must lie in (0, 1), got {self.value}")
        elif self.kind == FIXED:
            if self.value is None or not 0.0 <= self.value <= 1.0:
                raise ValueError(f"fixed threshold must lie in [0, 1], got {self.value}")
        elif self.kind in (AT_TEST, AT_VAL):
            if self.value is not None:
                raise ValueError(f"{self.kind} takes no value")
        else:
            raise ValueError(f"unknown policy kind {self.kind!r}")

    @classmethod
    def at_test(cls):
        return cls(AT_TEST)

    @classmethod
    def at_val(cls):
        return cls(AT_VAL)

    @classmethod
    def at_tnr(cls, level=0.95):
        return cls(AT_TNR, float(level))

    @classmethod
    def fixed(cls, t):
        return cls(FIXED, float(t))

    @property
    def label(self) -> str:
        if self.kind == AT_TNR:
            return f"@{self.value * 100:g}TNR"
        if self.kind == FIXED:
            return f"@fixed({self.value:g})"
        return "@test" if self.kind == AT_TEST else "@val"


@dataclass(frozen=True)
class ThresholdedRates:
    policy: str
    threshold: float
    fpr: float
    fnr: float


@dataclass(frozen=True)
class MetricReport:
    pair_name: str
    id_name: str
    auroc: float
    aupr_in: float
    aupr_out: float
    fpr95: float
    fnr95: float
    detection_error: float
    aufpr: float
    aufnr: float
    autc: float
    weight_fpr: float
    thresholded: tuple[ThresholdedRates, ...] = ()
    convention: str = DEFAULT_CONVENTION.value
    rule: str = DEFAULT_RULE.value
    integration: str = TRAPEZOID

    def rates_for(self, policy_label: str) -> ThresholdedRates:
        for r in self.thresholded:
            if r.policy == policy_label:
                return r
        raise KeyError(policy_label)


@dataclass(frozen=True)
class BenchmarkReport:
    id_name: str
    val_name: str | None
    per_dataset: tuple[MetricReport, ...]
    global_thresholds: tuple[tuple[str, float], ...]
    settings: dict = field(default_factory=dict, compare=False)


def select_threshold(
    policy: ThresholdPolicy,
    id: ScoreSet,
    val_ood: ScoreSet | None = None,
    test_ood: ScoreSet | None = None,
    rule: DecisionRule = DEFAULT_RULE,
) -> float:
    """Resolve a policy to a concrete threshold.

    ``at_tnr`` returns the smallest distinct ID score (or 0/1) at which at least
    the requested fraction of ID scores is kept as ID.
    """
    if policy.kind == FIXED:
        return float(policy.value)
    if policy.kind == AT_TNR:
        require_unit_interval(id)
        grid = class_grid(id).thresholds
        tnr = (len(id) - flagged_ood(id.sorted, grid, rule)) / len(id)
        return float(grid[np.flatnonzero(tnr >= policy.value)[0]])
    other = test_ood if policy.kind == AT_TEST else val_ood
    if other is None:
        which = "test" if policy.kind == AT_TEST else "validation"
        raise MissingDataset(f"policy {policy.label} needs a {which} OOD score set")
    t, _, _ = crossing_threshold(threshold_curve(id, other, rule=rule))
    return t


def evaluate_pair(
    id: ScoreSet,
    ood: ScoreSet,
    policies=(),
    *,
    weight_fpr: float = 0.5,
    integration: str = TRAPEZOID,
    rule: DecisionRule = DEFAULT_RULE,
    conv: Convention = DEFAULT_CONVENTION,
    grid=None,
) -> MetricReport:
    """Compute every metric for one ID/OOD pair.

    ``policies`` is a sequence of ``(ThresholdPolicy, threshold)`` pairs already
    resolved by :func:`select_threshold`; FPR and FNR are reported at each.
    ``grid`` is the AUTC integration grid (default: the pair's distinct scores).
    """
    require_unit_interval(id, ood)
    fpr95 = classic.rate_at_level(id, ood, classic.RateQuery.FPR_AT_TPR, 0.95, rule)[0]
    fnr95 = classic.rate_at_level(id, ood, classic.RateQuery.FNR_AT_TNR, 0.95, rule)[0]
    if conv is Convention.ID_POSITIVE:
        fpr95, fnr95 = fnr95, fpr95
    res = autc(id, ood, weight_fpr, integration, rule, conv, grid)

    rows = []
    if policies:
        ts = np.array([t for _, t in policies], dtype=np.float64)
        fpr, fnr = rates_at(id, ood, ts, rule, conv)
        for (policy, t), a, b in zip(policies, fpr, fnr):
            rows.append(ThresholdedRates(policy.label, float(t), float(a), float(b)))

    return MetricReport(
        pair_name=ood.name,
        id_name=id.name,
        auroc=classic.auroc(id, ood, conv),
        aupr_in=classic.aupr(id, ood, "in"),
        aupr_out=classic.aupr(id, ood, "out"),
        fpr95=fpr95,
        fnr95=fnr95,
        detection_error=classic.detection_error(id, ood, rule)[0],
        aufpr=res.aufpr,
        aufnr=res.aufnr,
        autc=res.autc,
        weight_fpr=res.weight_fpr,
        thresholded=tuple(rows),
        convention=conv.value,
        rule=rule.value,
        integration=integration,
    )


def run_benchmark(
    id: ScoreSet,
    val_ood: ScoreSet | None,
    test_oods,
    tnr_level: float = 0.95,
    *,
    weight_fpr: float = 0.5,
    integration: str = TRAPEZOID,
    rule: DecisionRule = DEFAULT_RULE,
    conv: Convention = DEFAULT_CONVENTION,
    workers: int = 1,
    settings: dict | None = None,
) -> BenchmarkReport:
    """Evaluate every test OOD set against ``id`` with shared global thresholds.

    Without ``val_ood`` the ``@val`` policy is skipped. Results come back in
    ``test_oods`` order, whatever the number of ``workers``.

    AUTC is integrated for every pair on one grid holding the distinct scores
    of the ID set and all test sets, so AUFPR is identical across datasets
    under either integration mode.
    """
    test_oods = list(test_oods)
    if not test_oods:
        raise MissingDataset("benchmark needs at least one test OOD score set")
    require_unit_interval(id, *test_oods)
    merged = id.distinct
    for o in test_oods:
        merged = kernels.merge_groups(merged, o.distinct)[0]
    shared = grid_from_values(merged)
    globals_ = [(ThresholdPolicy.at_tnr(tnr_level), select_threshold(ThresholdPolicy.at_tnr(tnr_level), id, rule=rule))]
    if val_ood is not None:
        globals_.append((ThresholdPolicy.at_val(), select_threshold(ThresholdPolicy.at_val(), id, val_ood, rule=rule)))

    def one(ood):
        local = (ThresholdPolicy.at_test(), select_threshold(ThresholdPolicy.at_test(), id, test_ood=ood, rule=rule))
        return evaluate_pair(
            id, ood, [local, *globals_],
            weight_fpr=weight_fpr, integration=integration, rule=rule, conv=conv, grid=shared,
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(one, test_oods))
    else:
        reports = [one(o) for o in test_oods]

    return BenchmarkReport(
        id_name=id.name,
        val_name=None if val_ood is None else val_ood.name,
        per_dataset=tuple(reports),
        global_thresholds=tuple((p.label, t) for p, t in globals_),
        settings=dict(settings or {}),
    )
