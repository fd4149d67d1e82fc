"""Seeded synthetic OOD scores from mixtures supported on [0, 1].

Sampling uses numpy's ``Generator`` over an explicit ``PCG64(seed)`` bit
generator, so identical ``(spec, n, seed)`` give identical scores. Steps, in order:

1. If the mixture has more than one component, draw component labels for
   all ``n`` samples with ``Generator.choice(k, size=n, p=weights)``.
2. For each component in declaration order, fill its samples in index order:
   ``truncated_gaussian`` by inverse CDF of the normal law truncated to
   [0, 1] applied to ``Generator.random``; ``uniform`` as
   ``lo + (hi - lo) * Generator.random``; ``point`` needs no draws.

The presets are loosely modelled on nine illustrative detectors arranged in
three rows of (nearly) equal AUROC. Within a row they differ in how far
apart the ID and OOD mass sit. They are not fits to any published data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.stats import truncnorm

from .errors import InvalidSpec, UnknownPreset
from .scores import Kind, ScoreSet, validate_scoreset


@dataclass(frozen=True)
class TruncatedGaussian:
    mean: float
    stddev: float

    kind = "truncated_gaussian"

    def __post_init__(self):
        if not (np.isfinite(self.mean) and np.isfinite(self.stddev)) or self.stddev <= 0:
            raise InvalidSpec(f"truncated_gaussian needs finite mean and stddev > 0, got {self}")

    def sample(self, rng, count):
        a, b = (0.0 - self.mean) / self.stddev, (1.0 - self.mean) / self.stddev
        u = rng.random(count)
        return truncnorm.ppf(u, a, b, loc=self.mean, scale=self.stddev)

    def params(self):
        return {"mean": self.mean, "stddev": self.stddev}


@dataclass(frozen=True)
class Uniform:
    lo: float
    hi: float

    kind = "uniform"

    def __post_init__(self):
        if not 0.0 <= self.lo < self.hi <= 1.0:
            raise InvalidSpec(f"uniform needs 0 <= lo < hi <= 1, got ({self.lo}, {self.hi})")

    def sample(self, rng, count):
        return self.lo + (self.hi - self.lo) * rng.random(count)

    def params(self):
        return {"lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class Point:
    value: float

    kind = "point"

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise InvalidSpec(f"point mass must lie in [0, 1], got {self.value}")

    def sample(self, rng, count):
        return np.full(count, self.value)

    def params(self):
        return {"value": self.value}


_KINDS = {c.kind: c for c in (TruncatedGaussian, Uniform, Point)}


@dataclass(frozen=True)
class SynthSpec:
    """Mixture of components with positive weights (normalized on use)."""

    components: tuple

    def __post_init__(self):
        if not self.components:
            raise InvalidSpec("a mixture needs at least one component")
        for dist, w in self.components:
            if not isinstance(dist, tuple(_KINDS.values())):
                raise InvalidSpec(f"unsupported component {dist!r}")
            if not (np.isfinite(w) and w > 0):
                raise InvalidSpec(f"component weights must be positive, got {w}")

    @classmethod
    def of(cls, *parts):
        """``SynthSpec.of(dist)`` or ``SynthSpec.of((dist, w), (dist, w), ...)``."""
        comps = tuple(p if isinstance(p, tuple) else (p, 1.0) for p in parts)
        return cls(comps)

    @property
    def weights(self) -> np.ndarray:
        w = np.array([w for _, w in self.components], dtype=np.float64)
        return w / w.sum()

    def to_dict(self):
        return {
            "components": [
                {"kind": d.kind, **d.params(), "weight": float(w)} for d, w in self.components
            ]
        }

    @classmethod
    def from_dict(cls, obj):
        try:
            comps = []
            for c in obj["components"]:
                c = dict(c)
                kind = c.pop("kind")
                weight = float(c.pop("weight", 1.0))
                if kind not in _KINDS:
                    raise InvalidSpec(f"unknown component kind {kind!r}")
                comps.append((_KINDS[kind](**{k: float(v) for k, v in c.items()}), weight))
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise InvalidSpec(f"malformed mixture spec: {exc}") from exc
        return cls(tuple(comps))

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InvalidSpec(f"invalid JSON: {exc}") from exc


def sample_scores(spec: SynthSpec, n: int, seed: int, name: str = "synth", kind: Kind = Kind.ID) -> ScoreSet:
    if n <= 0:
        raise InvalidSpec(f"sample size must be positive, got {n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    out = np.empty(n, dtype=np.float64)
    if len(spec.components) == 1:
        labels = np.zeros(n, dtype=np.int64)
    else:
        labels = rng.choice(len(spec.components), size=n, p=spec.weights)
    for c, (dist, _) in enumerate(spec.components):
        idx = np.flatnonzero(labels == c)
        if idx.size:
            out[idx] = dist.sample(rng, idx.size)
    # inverse-CDF round-off can land one ulp outside the support
    np.clip(out, 0.0, 1.0, out=out)
    return validate_scoreset(out, name, kind)


_G, _U, _P = TruncatedGaussian, Uniform, Point

# name -> (ID mixture, OOD mixture, note)
PRESETS = {
    "well_separated": (
        SynthSpec.of(_G(0.0, 0.012)), SynthSpec.of(_G(0.91, 0.03)),
        "ID mass at 0, OOD mass near 1; no overlap",
    ),
    "adjacent_peaks": (
        SynthSpec.of(_G(0.27, 0.01)), SynthSpec.of(_G(0.42, 0.01)),
        "two narrow peaks either side of 0.35; no overlap but tiny margin",
    ),
    "mid_separated": (
        SynthSpec.of(_G(0.2, 0.03)), SynthSpec.of(_G(0.61, 0.03)),
        "no overlap, moderate margin around the middle",
    ),
    "heavy_overlap": (
        SynthSpec.of(_G(0.0, 0.02)), SynthSpec.of(_G(0.1, 0.07)),
        "ID at 0, OOD squeezed just above it",
    ),
    "skewed_overlap": (
        SynthSpec.of(_G(0.0, 0.06)), SynthSpec.of(_G(0.3, 0.2)),
        "ID near 0, broad OOD mass in the lower half",
    ),
    "spread_overlap": (
        SynthSpec.of(_G(0.1, 0.26)), SynthSpec.of(_G(0.85, 0.26)),
        "broad masses at opposite ends with overlapping tails",
    ),
    "id_uniform": (
        SynthSpec.of(_U(0.0, 1.0)), SynthSpec.of(_G(0.85, 0.08)),
        "ID spread uniformly over [0, 1], OOD concentrated high",
    ),
    "wide_ood": (
        SynthSpec.of(_G(0.3, 0.15)), SynthSpec.of(_U(0.2, 1.0)),
        "ID around 0.3, OOD spread over [0.2, 1]",
    ),
    "mid_overlap": (
        SynthSpec.of(_G(0.3, 0.08)), SynthSpec.of(_G(0.45, 0.12)),
        "two overlapping bumps around 0.4",
    ),
}


def preset_names():
    return list(PRESETS)


def preset_pair(name: str) -> tuple[SynthSpec, SynthSpec]:
    """ID and OOD mixtures for a named preset."""
    try:
        id_spec, ood_spec, _ = PRESETS[name]
    except KeyError:
        raise UnknownPreset(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    return id_spec, ood_spec


def sample_preset(name: str, n: int, seed: int) -> tuple[ScoreSet, ScoreSet]:
    """Sample a preset pair; the OOD set uses ``seed + 1``."""
    id_spec, ood_spec = preset_pair(name)
    return (
        sample_scores(id_spec, n, seed, f"{name}-id", Kind.ID),
        sample_scores(ood_spec, n, seed + 1, f"{name}-ood", Kind.OOD),
    )
