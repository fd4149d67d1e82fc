"""Published metric values shipped with the package, and consistency checks on them."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .threshold_metrics import combine

# published AUTC values are rounded; these are the slack allowed per source
NINE_MODEL_TOL = 5e-4
TABLE_TOL_PERCENT = 0.01


@lru_cache(maxsize=1)
def published_values() -> dict:
    text = resources.files("oodeval").joinpath("data/published_values.json").read_text(encoding="utf-8")
    return json.loads(text)


@dataclass(frozen=True)
class Check:
    label: str
    ok: bool
    detail: str


def check_combination_identity() -> list[Check]:
    """Verify AUTC = (AUFPR + AUFNR) / 2 on every fixture row."""
    data = published_values()
    checks = []
    nine = data["threshold_metrics_nine_models"]
    for model, a, b, reported in zip(nine["models"], nine["aufpr"], nine["aufnr"], nine["autc"]):
        got = combine(a, b)
        ok = abs(got - reported) <= NINE_MODEL_TOL
        checks.append(Check(f"nine-models/{model}", ok, f"computed {got:.6f} vs published {reported}"))
    for row in data["benchmark_table"]:
        got = round(100 * combine(row["aufpr"], row["aufnr"]), 4)
        expected = row.get("autc_consistent", row["autc"])
        ok = abs(got - 100 * expected) <= TABLE_TOL_PERCENT + 1e-9
        detail = f"computed {got:.3f} vs expected {100 * expected:.2f}"
        if "note" in row:
            detail += f" (published {100 * row['autc']:.2f}: {row['note']})"
        checks.append(Check(f"table/{row['model']}/{row['dataset']}", ok, detail))
    return checks
