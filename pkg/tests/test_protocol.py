import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oodeval.errors import MissingDataset
from oodeval.protocol import ThresholdPolicy, evaluate_pair, run_benchmark, select_threshold
from oodeval.scores import Convention, Kind
from oodeval.threshold_metrics import EXACT_STEP, combine

from conftest import S
from oracles import rates


def O(values, name="ood"):
    return S(values, name, Kind.OOD)


def test_policy_labels_and_validation():
    assert ThresholdPolicy.at_test().label == "@test"
    assert ThresholdPolicy.at_val().label == "@val"
    assert ThresholdPolicy.at_tnr(0.95).label == "@95TNR"
    assert ThresholdPolicy.fixed(0.5).label == "@fixed(0.5)"
    for bad in (lambda: ThresholdPolicy.at_tnr(1.0), lambda: ThresholdPolicy.fixed(1.5),
                lambda: ThresholdPolicy("at_test", 0.3), lambda: ThresholdPolicy("median")):
        with pytest.raises(ValueError):
            bad()


def test_select_threshold_examples():
    grid = S(np.round(np.arange(1, 101) / 100, 2))
    assert select_threshold(ThresholdPolicy.at_tnr(0.95), grid) == pytest.approx(0.95)
    assert select_threshold(ThresholdPolicy.at_test(), S([0.1]), test_ood=O([0.9])) == 0.1
    assert select_threshold(ThresholdPolicy.fixed(0.5), S([0.1])) == 0.5
    assert select_threshold(ThresholdPolicy.at_val(), S([0.1, 0.3]), val_ood=O([0.7, 0.9])) == 0.3


def test_select_threshold_missing_sets():
    with pytest.raises(MissingDataset):
        select_threshold(ThresholdPolicy.at_test(), S([0.1]))
    with pytest.raises(MissingDataset):
        select_threshold(ThresholdPolicy.at_val(), S([0.1]), test_ood=O([0.9]))


@given(st.lists(st.floats(0, 1), min_size=1, max_size=60), st.sampled_from([0.5, 0.9, 0.95, 0.99]))
def test_at_tnr_is_smallest_feasible(a, level):
    t = select_threshold(ThresholdPolicy.at_tnr(level), S(a))
    tnr = lambda x: sum(v <= x for v in a) / len(a)
    assert tnr(t) >= level
    assert all(tnr(x) < level for x in sorted(set(a) | {0.0}) if x < t)


def test_evaluate_pair_perfect():
    r = evaluate_pair(S([0.0] * 5), O([1.0] * 4), integration=EXACT_STEP)
    assert (r.auroc, r.aupr_in, r.aupr_out, r.fpr95, r.fnr95, r.autc) == (1, 1, 1, 0, 0, 0)
    assert r.detection_error == 0


def test_evaluate_pair_identical():
    s = np.round(np.arange(1, 21) / 20, 2)
    r = evaluate_pair(S(s), O(s), integration=EXACT_STEP)
    assert r.auroc == 0.5 and r.detection_error == 0.5
    assert r.autc == pytest.approx(0.5, abs=1e-12)


def test_evaluate_pair_reports_policy_rates(rng):
    a, b = rng.random(40), rng.random(30) * 0.6 + 0.4
    pol = [(ThresholdPolicy.fixed(0.5), 0.5), (ThresholdPolicy.at_tnr(0.9), select_threshold(ThresholdPolicy.at_tnr(0.9), S(a)))]
    r = evaluate_pair(S(a), O(b), pol)
    for policy, t in pol:
        got = r.rates_for(policy.label)
        assert got.threshold == t and (got.fpr, got.fnr) == rates(a.tolist(), b.tolist(), t)
    with pytest.raises(KeyError):
        r.rates_for("@val")
    assert r.autc == pytest.approx(combine(r.aufpr, r.aufnr, r.weight_fpr), abs=1e-12)
    for v in (r.auroc, r.aupr_in, r.aupr_out, r.fpr95, r.fnr95, r.detection_error, r.aufpr, r.aufnr, r.autc):
        assert 0 <= v <= 1


def test_evaluate_pair_id_positive_swaps_rates(rng):
    a, b = rng.random(40), rng.random(30) * 0.6 + 0.3
    pol = [(ThresholdPolicy.fixed(0.5), 0.5)]
    base = evaluate_pair(S(a), O(b), pol)
    swapped = evaluate_pair(S(a), O(b), pol, conv=Convention.ID_POSITIVE)
    assert (swapped.fpr95, swapped.fnr95) == (base.fnr95, base.fpr95)
    assert (swapped.aufpr, swapped.aufnr) == (base.aufnr, base.aufpr)
    assert swapped.autc == base.autc and swapped.convention == "id-positive"
    s, b0 = swapped.thresholded[0], base.thresholded[0]
    assert (s.fpr, s.fnr) == (b0.fnr, b0.fpr)


def test_evaluate_pair_deterministic(rng):
    a, b = rng.random(100), rng.random(100)
    assert evaluate_pair(S(a), O(b)) == evaluate_pair(S(a), O(b))


def test_benchmark_example():
    rep = run_benchmark(S([0.1, 0.2]), O([0.8, 0.9], "val"), [O([0.7, 0.95], "test")])
    assert dict(rep.global_thresholds)["@95TNR"] == 0.2
    r = rep.per_dataset[0].rates_for("@95TNR")
    assert (r.threshold, r.fpr, r.fnr) == (0.2, 0.0, 0.0)
    assert rep.val_name == "val" and rep.id_name == "s"


def _three_sets(rng, n=2000):
    id_ = S(rng.beta(2, 5, n), "id")
    oods = [O(rng.beta(a, b, n), f"ood{i}") for i, (a, b) in enumerate([(5, 2), (3, 3), (2, 4)])]
    val = O(rng.beta(4, 2, n), "val")
    return id_, val, oods


@pytest.mark.parametrize("integration", ["trapezoid", EXACT_STEP])
def test_global_threshold_constancy(rng, integration):
    id_, val, oods = _three_sets(rng)
    rep = run_benchmark(id_, val, oods, integration=integration)
    first = rep.per_dataset[0]
    for r in rep.per_dataset:
        assert r.aufpr == first.aufpr
        for label, t in rep.global_thresholds:
            assert r.rates_for(label).fpr == first.rates_for(label).fpr
            assert r.rates_for(label).threshold == t


def test_global_thresholds_ignore_test_sets(rng):
    id_, val, oods = _three_sets(rng)
    ref = run_benchmark(id_, val, oods).global_thresholds
    for perm in itertools.permutations(oods):
        assert run_benchmark(id_, val, perm).global_thresholds == ref
    for k in range(1, 3):
        assert run_benchmark(id_, val, oods[:k]).global_thresholds == ref


def test_test_set_equal_to_val(rng):
    id_, val, _ = _three_sets(rng)
    r = run_benchmark(id_, val, [val.renamed("copy")]).per_dataset[0]
    at_val, at_test = r.rates_for("@val"), r.rates_for("@test")
    assert (at_val.threshold, at_val.fpr, at_val.fnr) == (at_test.threshold, at_test.fpr, at_test.fnr)


def test_benchmark_exact_matches_standalone(rng):
    id_, val, oods = _three_sets(rng, 500)
    rep = run_benchmark(id_, val, oods, integration=EXACT_STEP)
    for r, o in zip(rep.per_dataset, oods):
        assert r.autc == pytest.approx(evaluate_pair(id_, o, integration=EXACT_STEP).autc, abs=1e-12)


def test_workers_do_not_change_result(rng):
    id_, val, oods = _three_sets(rng)
    assert run_benchmark(id_, val, oods, workers=3) == run_benchmark(id_, val, oods)


def test_benchmark_without_val_and_empty(rng):
    id_, _, oods = _three_sets(rng, 200)
    rep = run_benchmark(id_, None, oods)
    assert [label for label, _ in rep.global_thresholds] == ["@95TNR"]
    assert rep.val_name is None
    with pytest.raises(MissingDataset):
        run_benchmark(id_, None, [])
