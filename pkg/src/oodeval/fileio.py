"""Score file formats, curve export, report rendering and run configuration.

Score files
-----------
``csv_single_column``
    One number per line, optional ``score`` header. The caller assigns the kind.
``csv_score_label``
    Header ``score,label``; labels ``id``/``ood``, case-insensitive.
``jsonl``
    One object per line with a numeric ``score`` and an optional ``label``.

Floats are always written with ``repr``, so writing and re-reading a file
gives back exactly the same values.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .classic import pr_curve, roc_curve
from .errors import InvalidSpec, OodEvalError, ParseError
from .protocol import BenchmarkReport, MetricReport, ThresholdedRates
from .scores import DEFAULT_CONVENTION, DEFAULT_RULE, Convention, DecisionRule, Kind, ScoreSet, require_unit_interval, validate_scoreset
from .sweep import UNIFORM, build_grid, threshold_curve

CSV_SINGLE = "csv_single_column"
CSV_LABELED = "csv_score_label"
JSONL = "jsonl"
FORMATS = (CSV_SINGLE, CSV_LABELED, JSONL)

REPORT_SCHEMA = "oodeval.benchmark/1"
PAIR_SCHEMA = "oodeval.pair/1"


def _fmt(x) -> str:
    return repr(float(x))


def detect_format(path) -> str:
    path = Path(path)
    if path.suffix.lower() in (".jsonl", ".ndjson"):
        return JSONL
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                head = line.strip().replace(" ", "").lower()
                return CSV_LABELED if head == "score,label" else CSV_SINGLE
    return CSV_SINGLE


def _parse_label(text, lineno, path):
    label = text.strip().lower()
    if label not in ("id", "ood"):
        raise ParseError(lineno, f"label must be 'id' or 'ood', got {text.strip()!r}", path)
    return Kind(label)


def _parse_float(text, lineno, path):
    try:
        return float(text)
    except ValueError:
        raise ParseError(lineno, f"not a number: {text.strip()!r}", path) from None


def _read_single(lines, path):
    start = 1 if lines and lines[0].strip().lower() == "score" else 0
    body = lines[start:]
    while body and not body[-1].strip():
        body = body[:-1]
    try:
        return np.array(body, dtype=np.float64)
    except ValueError:
        pass
    values = []
    for lineno, line in enumerate(body, start=start + 1):
        if "," in line:
            raise ParseError(lineno, "expected a single value per line", path)
        values.append(_parse_float(line, lineno, path))
    return np.array(values, dtype=np.float64)


def _read_labeled(lines, path):
    if not lines or lines[0].strip().replace(" ", "").lower() != "score,label":
        raise ParseError(1, "expected header 'score,label'", path)
    by_kind = {Kind.ID: [], Kind.OOD: []}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError(lineno, f"expected 2 fields, got {len(parts)}", path)
        by_kind[_parse_label(parts[1], lineno, path)].append(_parse_float(parts[0], lineno, path))
    return by_kind


def _read_jsonl(lines, path, kind):
    by_kind = {Kind.ID: [], Kind.OOD: []}
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(lineno, f"invalid JSON ({exc.msg})", path) from None
        if not isinstance(obj, dict) or "score" not in obj:
            raise ParseError(lineno, "object with a 'score' field expected", path)
        score = obj["score"]
        if isinstance(score, bool) or not isinstance(score, (int, float)):
            raise ParseError(lineno, f"score must be a number, got {score!r}", path)
        if "label" in obj:
            k = _parse_label(str(obj["label"]), lineno, path)
        elif kind is not None:
            k = kind
        else:
            raise ParseError(lineno, "missing 'label' and no kind assigned by the caller", path)
        by_kind[k].append(float(score))
    return by_kind


def parse_score_file(path, fmt: str | None = None, kind: Kind | None = None, name: str | None = None) -> dict:
    """Read a score file into ``{Kind: ScoreSet}``.

    Single-column files need ``kind``. Labeled files return one set per label
    present; the ID set is named ``<name>-id`` and the OOD set ``<name>``.

    Raises
    ------
    ParseError, EmptyInput, NonFiniteScore
    """
    path = str(path)
    fmt = fmt or detect_format(path)
    if fmt not in FORMATS:
        raise InvalidSpec(f"unknown score file format {fmt!r}")
    name = name or Path(path).stem
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()

    if fmt == CSV_SINGLE:
        if kind is None:
            raise InvalidSpec("single-column score files need an explicit kind (id or ood)")
        kind = Kind(kind)
        return {kind: validate_scoreset(_read_single(lines, path), name, kind)}

    by_kind = _read_labeled(lines, path) if fmt == CSV_LABELED else _read_jsonl(lines, path, kind)
    present = {k: v for k, v in by_kind.items() if v}
    if not present:
        return {Kind(kind or Kind.ID): validate_scoreset([], name, kind or Kind.ID)}
    both = len(present) == 2
    out = {}
    for k, vals in present.items():
        set_name = f"{name}-id" if (both and k is Kind.ID) else name
        out[k] = validate_scoreset(vals, set_name, k)
    return out


def write_score_file(path, sets, fmt: str = CSV_SINGLE) -> None:
    """Write one or more score sets; multi-set output needs a labeled format."""
    sets = [sets] if isinstance(sets, ScoreSet) else list(sets)
    if fmt == CSV_SINGLE and len(sets) != 1:
        raise InvalidSpec("csv_single_column holds exactly one score set")
    lines = []
    if fmt == CSV_SINGLE:
        lines.append("score")
        lines.extend(_fmt(x) for x in sets[0].scores)
    elif fmt == CSV_LABELED:
        lines.append("score,label")
        for s in sets:
            lines.extend(f"{_fmt(x)},{s.kind.value}" for x in s.scores)
    elif fmt == JSONL:
        for s in sets:
            lines.extend(json.dumps({"score": float(x), "label": s.kind.value}) for x in s.scores)
    else:
        raise InvalidSpec(f"unknown score file format {fmt!r}")
    _write_text(path, "\n".join(lines) + "\n")


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _write_csv(path, header, columns):
    rows = [header]
    rows.extend(",".join(_fmt(v) for v in row) for row in zip(*columns))
    _write_text(path, "\n".join(rows) + "\n")


def _thin(points: np.ndarray, max_points: int | None) -> np.ndarray:
    """Keep at most ``max_points`` rows, evenly spaced by index, first and last included."""
    if not max_points or points.shape[0] <= max_points:
        return points
    idx = np.unique(np.linspace(0, points.shape[0] - 1, max_points).round().astype(np.int64))
    return points[idx]


def export_curves(
    id: ScoreSet,
    ood: ScoreSet,
    out_dir,
    bins: int = 20,
    rule: DecisionRule = DEFAULT_RULE,
    conv: Convention = DEFAULT_CONVENTION,
    max_points: int | None = None,
) -> list[Path]:
    """Write plot-ready curve data for one pair as CSV files in ``out_dir``.

    By default every distinct score contributes a row. With ``max_points``,
    larger inputs are written at plotting resolution: the threshold curve is
    sampled on a uniform grid of ``max_points`` thresholds, and ROC/PR points
    are thinned evenly by index. Histogram densities are normalized so each
    class integrates to 1 over [0, 1].
    """
    require_unit_interval(id, ood)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    grid = build_grid(id, ood)
    if max_points and len(grid) > max_points:
        grid = build_grid(id, ood, UNIFORM, n=max_points)
    curve = threshold_curve(id, ood, grid, rule=rule, conv=conv)
    p = out / "threshold_curve.csv"
    _write_csv(p, "threshold,fpr,fnr", [curve.thresholds, curve.fpr, curve.fnr])
    written.append(p)

    roc = _thin(roc_curve(id, ood).points, max_points)
    p = out / "roc_curve.csv"
    _write_csv(p, "fpr,tpr", [roc[:, 0], roc[:, 1]])
    written.append(p)

    for side in ("out", "in"):
        pr = _thin(pr_curve(id, ood, side).points, max_points)
        p = out / f"pr_curve_{side}.csv"
        _write_csv(p, "recall,precision", [pr[:, 0], pr[:, 1]])
        written.append(p)

    edges = np.linspace(0.0, 1.0, bins + 1)
    id_d, _ = np.histogram(id.scores, bins=edges, density=True)
    ood_d, _ = np.histogram(ood.scores, bins=edges, density=True)
    p = out / "histogram.csv"
    _write_csv(p, "bin_left,bin_right,id_density,ood_density", [edges[:-1], edges[1:], id_d, ood_d])
    written.append(p)
    return written


# -- reports -----------------------------------------------------------------


def metric_report_to_dict(r: MetricReport) -> dict:
    d = asdict(r)
    d["thresholded"] = [asdict(t) for t in r.thresholded]
    return d


def metric_report_from_dict(d: dict) -> MetricReport:
    d = dict(d)
    d["thresholded"] = tuple(ThresholdedRates(**t) for t in d.get("thresholded", ()))
    names = {f.name for f in fields(MetricReport)}
    return MetricReport(**{k: v for k, v in d.items() if k in names})


def report_to_dict(r: BenchmarkReport) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "id_name": r.id_name,
        "val_name": r.val_name,
        "global_thresholds": [{"policy": p, "threshold": t} for p, t in r.global_thresholds],
        "per_dataset": [metric_report_to_dict(m) for m in r.per_dataset],
        "settings": r.settings,
    }


def report_from_dict(d: dict) -> BenchmarkReport:
    if d.get("schema") != REPORT_SCHEMA:
        raise InvalidSpec(f"not a benchmark report (schema {d.get('schema')!r})")
    return BenchmarkReport(
        id_name=d["id_name"],
        val_name=d["val_name"],
        per_dataset=tuple(metric_report_from_dict(m) for m in d["per_dataset"]),
        global_thresholds=tuple((g["policy"], g["threshold"]) for g in d["global_thresholds"]),
        settings=d.get("settings", {}),
    )


def report_from_json(text: str) -> BenchmarkReport:
    return report_from_dict(json.loads(text))


def _pct(x) -> str:
    return f"{100 * x:.2f}"


def _md_row(label, cells):
    return "| " + " | ".join([label, *cells]) + " |"


def _render_markdown(r: BenchmarkReport) -> str:
    ds = r.per_dataset
    n = len(ds)

    def per(attr):
        return [_pct(getattr(m, attr)) for m in ds]

    def shared(value):
        return [_pct(value)] + [""] * (n - 1)

    lines = [
        f"OOD detection performance, ID set `{r.id_name}`"
        + (f", validation OOD set `{r.val_name}`" if r.val_name else "")
        + ". Scores in percent.",
        "",
        _md_row("", [f"{m.pair_name}" for m in ds]),
        _md_row("---", ["---:"] * n),
        _md_row("AUROC ↑", per("auroc")),
        _md_row("AUPR-in ↑", per("aupr_in")),
        _md_row("AUPR-out ↑", per("aupr_out")),
        _md_row("FPR95 ↓", per("fpr95")),
        _md_row("FNR95 ↓", per("fnr95")),
        _md_row("Detection error ↓", per("detection_error")),
        _md_row("AUFPR ↓ (all datasets)", shared(ds[0].aufpr)),
        _md_row("AUFNR ↓", per("aufnr")),
        _md_row("**AUTC** ↓", [f"**{c}**" for c in per("autc")]),
    ]
    global_labels = [p for p, _ in r.global_thresholds]
    policies = [t.policy for t in ds[0].thresholded]
    for policy in policies:
        rates = [m.rates_for(policy) for m in ds]
        if policy in global_labels:
            lines.append(_md_row(f"{policy} FPR ↓ (all datasets)", shared(rates[0].fpr)))
        else:
            lines.append(_md_row(f"{policy} FPR ↓", [_pct(x.fpr) for x in rates]))
        lines.append(_md_row(f"{policy} FNR ↓", [_pct(x.fnr) for x in rates]))
    lines.append("")
    if r.global_thresholds:
        lines.append("Global thresholds: " + ", ".join(f"{p} = {t!r}" for p, t in r.global_thresholds) + ".")
    m0 = ds[0]
    lines.append(
        f"Settings: convention {m0.convention}, rule {m0.rule}, integration {m0.integration}, "
        f"AUTC weight on FPR {m0.weight_fpr!r}; FPR95 = FPR at 95% TPR, FNR95 = FNR at 95% TNR."
    )
    return "\n".join(lines) + "\n"


def render_report(r: BenchmarkReport, fmt: str = "json") -> str:
    """Render a benchmark report as schema-stable JSON or a Markdown table."""
    if fmt == "json":
        return json.dumps(report_to_dict(r), indent=2) + "\n"
    if fmt == "markdown":
        return _render_markdown(r)
    raise InvalidSpec(f"unknown report format {fmt!r}")


def render_pair_report(r: MetricReport, fmt: str = "json", settings: dict | None = None) -> str:
    if fmt == "json":
        d = {"schema": PAIR_SCHEMA, **metric_report_to_dict(r), "settings": settings or {}}
        return json.dumps(d, indent=2) + "\n"
    if fmt == "markdown":
        rows = [
            ("AUROC ↑", r.auroc), ("AUPR-in ↑", r.aupr_in), ("AUPR-out ↑", r.aupr_out),
            ("FPR95 ↓", r.fpr95), ("FNR95 ↓", r.fnr95), ("Detection error ↓", r.detection_error),
            ("AUFPR ↓", r.aufpr), ("AUFNR ↓", r.aufnr), ("**AUTC** ↓", r.autc),
        ]
        for t in r.thresholded:
            rows.append((f"{t.policy} FPR ↓", t.fpr))
            rows.append((f"{t.policy} FNR ↓", t.fnr))
        lines = [f"`{r.id_name}` vs `{r.pair_name}`. Scores in percent.", "", "| Metric | Value |", "| --- | ---: |"]
        lines.extend(f"| {k} | {_pct(v)} |" for k, v in rows)
        return "\n".join(lines) + "\n"
    raise InvalidSpec(f"unknown report format {fmt!r}")


# -- run configuration ---------------------------------------------------------


@dataclass
class RunConfig:
    id_file: str | None = None
    val_file: str | None = None
    test_files: list = field(default_factory=list)
    convention: str = DEFAULT_CONVENTION.value
    rule: str = DEFAULT_RULE.value
    integration: str = "trapezoid"
    weight_fpr: float = 0.5
    tnr_level: float = 0.95
    bounds: list | None = None
    out_dir: str | None = None
    seed: int = 0
    format: str = "json"

    def validate(self) -> "RunConfig":
        try:
            Convention(self.convention)
            DecisionRule(self.rule)
        except ValueError as exc:
            raise InvalidSpec(str(exc)) from None
        if self.integration not in ("trapezoid", "exact_step"):
            raise InvalidSpec(f"unknown integration {self.integration!r}")
        if not 0.0 <= float(self.weight_fpr) <= 1.0:
            raise InvalidSpec(f"weight_fpr must lie in [0, 1], got {self.weight_fpr}")
        if not 0.0 < float(self.tnr_level) < 1.0:
            raise InvalidSpec(f"tnr_level must lie in (0, 1), got {self.tnr_level}")
        if self.bounds is not None and len(self.bounds) != 2:
            raise InvalidSpec("bounds must be a pair [lo, hi]")
        if self.format not in ("json", "markdown"):
            raise InvalidSpec(f"unknown format {self.format!r}")
        for f in [self.id_file, self.val_file, *self.test_files]:
            if f is not None and not os.path.isfile(f):
                raise InvalidSpec(f"score file not found: {f}")
        return self

    def to_dict(self) -> dict:
        return asdict(self)


def load_config(path) -> dict:
    """Read a JSON run config; unknown keys are rejected."""
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidSpec(f"config {path}: invalid JSON ({exc.msg})") from None
    if not isinstance(obj, dict):
        raise InvalidSpec(f"config {path}: top level must be an object")
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(obj) - known)
    if unknown:
        raise InvalidSpec(f"config {path}: unknown keys {unknown}")
    return obj


def merge_config(file_values: dict, overrides: dict) -> RunConfig:
    """Build a config from file values, letting non-None overrides win."""
    merged = dict(file_values)
    merged.update({k: v for k, v in overrides.items() if v is not None and v != []})
    try:
        return RunConfig(**merged).validate()
    except TypeError as exc:
        raise OodEvalError(str(exc)) from None
