"""Score containers and the conventions shared by every metric.

Scores are stored as read-only float64 arrays. A sorted copy is computed
lazily and cached, since nearly every metric starts from sorted scores.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DegenerateBounds, EmptyInput, NonFiniteScore, ScoresOutOfRange


class Kind(enum.Enum):
    ID = "id"
    OOD = "ood"


class Convention(enum.Enum):
    """Which class counts as positive when computing confusion rates."""

    OOD_POSITIVE = "ood-positive"
    ID_POSITIVE = "id-positive"


class DecisionRule(enum.Enum):
    """Comparator used to flag a sample as OOD: ``score > t`` or ``score >= t``."""

    STRICT_GREATER = "gt"
    GREATER_OR_EQUAL = "ge"


DEFAULT_CONVENTION = Convention.OOD_POSITIVE
DEFAULT_RULE = DecisionRule.STRICT_GREATER


@dataclass(frozen=True, eq=False)
class ScoreSet:
    """Scalar OOD scores from a single source (ID data or one OOD dataset)."""

    name: str
    scores: np.ndarray = field(repr=False)
    kind: Kind = Kind.ID

    def __len__(self):
        return self.scores.shape[0]

    def __eq__(self, other):
        if not isinstance(other, ScoreSet):
            return NotImplemented
        return (
            self.name == other.name
            and self.kind == other.kind
            and np.array_equal(self.scores, other.scores)
        )

    __hash__ = None

    @cached_property
    def sorted(self) -> np.ndarray:
        out = np.sort(self.scores, kind="stable")
        out.setflags(write=False)
        return out

    @cached_property
    def distinct(self) -> np.ndarray:
        s = self.sorted
        keep = np.empty(s.shape[0], dtype=bool)
        keep[0] = True
        np.not_equal(s[1:], s[:-1], out=keep[1:])
        out = s[keep]
        out.setflags(write=False)
        return out

    @property
    def mean(self) -> float:
        return float(np.mean(self.scores))

    def in_unit_interval(self) -> bool:
        s = self.sorted
        return bool(s[0] >= 0.0 and s[-1] <= 1.0)

    def renamed(self, name: str) -> "ScoreSet":
        return ScoreSet(name, self.scores, self.kind)


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True).reshape(-1)
    arr.setflags(write=False)
    return arr


def validate_scoreset(raw, name: str, kind: Kind | str = Kind.ID) -> ScoreSet:
    """Build a :class:`ScoreSet`, rejecting empty or non-finite input.

    Values are copied into a read-only float64 array in input order.

    Raises
    ------
    EmptyInput
        If ``raw`` holds no values.
    NonFiniteScore
        On the first NaN or infinite value; ``.index`` holds its position.
    """
    kind = Kind(kind) if not isinstance(kind, Kind) else kind
    try:
        arr = _frozen_array(raw)
    except (TypeError, ValueError) as exc:
        raise NonFiniteScore(-1, raw, name) from exc
    if arr.size == 0:
        raise EmptyInput(f"score set {name!r} is empty")
    finite = np.isfinite(arr)
    if not finite.all():
        idx = int(np.argmin(finite))
        raise NonFiniteScore(idx, float(arr[idx]), name)
    return ScoreSet(name, arr, kind)


def normalize_scores(s: ScoreSet, bounds: tuple[float, float]) -> ScoreSet:
    """Map scores affinely so ``lo -> 0`` and ``hi -> 1``, clipping the rest.

    ``bounds`` must come from the caller (or from ID/validation data), never
    from the OOD test set being evaluated.
    """
    lo, hi = (float(b) for b in bounds)
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo >= hi:
        raise DegenerateBounds(f"normalization bounds must satisfy lo < hi, got ({lo}, {hi})")
    if lo == 0.0 and hi == 1.0:
        out = np.clip(s.scores, 0.0, 1.0)
    else:
        out = np.clip((s.scores - lo) / (hi - lo), 0.0, 1.0)
    out.setflags(write=False)
    return ScoreSet(s.name, out, s.kind)


def require_unit_interval(*sets: ScoreSet) -> None:
    for s in sets:
        if not s.in_unit_interval():
            raise ScoresOutOfRange(
                f"scores of {s.name!r} lie outside [0, 1] "
                f"(min={s.sorted[0]!r}, max={s.sorted[-1]!r}); normalize them first"
            )
