import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oodeval.errors import DegenerateBounds, EmptyInput, NonFiniteScore, ScoresOutOfRange
from oodeval.scores import Kind, normalize_scores, require_unit_interval, validate_scoreset

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)
unit = st.floats(0.0, 1.0)


def test_valid_scoreset():
    s = validate_scoreset([0.1, 0.5, 0.9], "cifar10", Kind.ID)
    assert len(s) == 3
    assert s.name == "cifar10" and s.kind is Kind.ID
    assert s.scores.tolist() == [0.1, 0.5, 0.9]


def test_empty_input():
    with pytest.raises(EmptyInput):
        validate_scoreset([], "x")


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_non_finite_reports_index(bad):
    with pytest.raises(NonFiniteScore) as exc:
        validate_scoreset([0.1, bad], "x")
    assert exc.value.index == 1


def test_scores_are_read_only():
    s = validate_scoreset([0.3, 0.1], "x")
    with pytest.raises(ValueError):
        s.scores[0] = 5.0
    with pytest.raises(ValueError):
        s.sorted[0] = 5.0


def test_kind_accepts_strings():
    assert validate_scoreset([0.2], "x", "ood").kind is Kind.OOD


@given(st.lists(finite, min_size=1, max_size=50))
def test_round_trip_preserves_values(values):
    s = validate_scoreset(values, "x")
    assert s.scores.tolist() == values


@pytest.mark.parametrize(
    "scores, bounds, expected",
    [
        ([2, 6, 10], (2, 10), [0.0, 0.5, 1.0]),
        ([0.3], (0, 1), [0.3]),
        ([-5, 15], (0, 10), [0.0, 1.0]),
    ],
)
def test_normalize_examples(scores, bounds, expected):
    out = normalize_scores(validate_scoreset(scores, "x"), bounds)
    assert out.scores.tolist() == expected


@pytest.mark.parametrize("bounds", [(1, 1), (2, 1), (0, math.inf)])
def test_degenerate_bounds(bounds):
    with pytest.raises(DegenerateBounds):
        normalize_scores(validate_scoreset([0.5], "x"), bounds)


@given(st.lists(unit, min_size=1, max_size=40))
def test_normalize_idempotent_on_unit_interval(values):
    s = validate_scoreset(values, "x")
    once = normalize_scores(s, (0, 1))
    assert once.scores.tolist() == values
    assert normalize_scores(once, (0, 1)).scores.tolist() == values


@given(
    st.lists(st.floats(-100, 100), min_size=2, max_size=40),
    st.floats(-200, -101),
    st.floats(101, 200),
)
def test_normalize_monotone_and_bounded(values, lo, hi):
    out = normalize_scores(validate_scoreset(values, "x"), (lo, hi)).scores
    assert np.all((out >= 0) & (out <= 1))
    order = np.argsort(values, kind="stable")
    assert np.all(np.diff(out[order]) >= 0)


def test_normalize_preserves_order_and_name():
    s = validate_scoreset([3.0, 1.0, 2.0], "svhn", Kind.OOD)
    out = normalize_scores(s, (0, 4))
    assert out.scores.tolist() == [0.75, 0.25, 0.5]
    assert out.name == "svhn" and out.kind is Kind.OOD


def test_require_unit_interval():
    require_unit_interval(validate_scoreset([0.0, 1.0], "ok"))
    with pytest.raises(ScoresOutOfRange):
        require_unit_interval(validate_scoreset([0.5, 1.5], "bad"))
