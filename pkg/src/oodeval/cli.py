"""Command-line interface: ``oodeval {eval,bench,curves,synth,selftest}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .errors import InvalidSpec, MissingDataset, OodEvalError
from .fileio import (
    CSV_SINGLE,
    export_curves,
    load_config,
    merge_config,
    parse_score_file,
    render_pair_report,
    render_report,
    write_score_file,
)
from .fixture import check_combination_identity
from .protocol import ThresholdPolicy, evaluate_pair, run_benchmark, select_threshold
from .scores import Convention, DecisionRule, Kind, normalize_scores
from .synth import SynthSpec, preset_names, sample_preset, sample_scores

_INTEGRATION = {"trapezoid": "trapezoid", "exact": "exact_step", "exact_step": "exact_step"}


def _bounds(text):
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'lo,hi', got {text!r}") from None
    return [lo, hi]


def _common(p):
    p.add_argument("--config", help="JSON run config; flags override its fields")
    p.add_argument("--convention", choices=[c.value for c in Convention])
    p.add_argument("--rule", choices=[r.value for r in DecisionRule])
    p.add_argument("--integration", choices=sorted(_INTEGRATION))
    p.add_argument("--weight-fpr", type=float, dest="weight_fpr")
    p.add_argument("--tnr-level", type=float, dest="tnr_level")
    p.add_argument("--bounds", type=_bounds, help="min-max normalize scores from [lo, hi] to [0, 1]; write --bounds=lo,hi when lo is negative")
    p.add_argument("--format", choices=["json", "markdown"])
    p.add_argument("--out", dest="out_dir")
    p.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oodeval", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="all metrics for one ID/OOD pair")
    _common(p)
    p.add_argument("--id", dest="id_file", help="ID scores (or a labeled file holding both classes)")
    p.add_argument("--ood", dest="test_files", action="append", default=[])

    p = sub.add_parser("bench", help="several OOD sets with shared global thresholds")
    _common(p)
    p.add_argument("--id", dest="id_file")
    p.add_argument("--val", dest="val_file")
    p.add_argument("--ood", dest="test_files", action="append", default=[])
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--curve-points", type=int, default=2001, dest="curve_points",
                   help="max rows per exported curve with --out (0 = every distinct score)")

    p = sub.add_parser("curves", help="export plot-ready curve CSVs for one pair")
    _common(p)
    p.add_argument("--id", dest="id_file")
    p.add_argument("--ood", dest="test_files", action="append", default=[])
    p.add_argument("--bins", type=int, default=20)

    p = sub.add_parser("synth", help="sample synthetic score files")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--spec", help="JSON mixture spec, or {'sets': {name: spec}}")
    src.add_argument("--preset", choices=preset_names())
    p.add_argument("-n", "--n", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--name", default="synth")
    p.add_argument("--out", dest="out_dir", required=True)

    sub.add_parser("selftest", help="check the AUTC identity on the bundled published values")
    return parser


def _config(args):
    file_values = load_config(args.config) if args.config else {}
    overrides = {
        k: getattr(args, k, None)
        for k in ("id_file", "val_file", "test_files", "convention", "rule", "weight_fpr",
                  "tnr_level", "bounds", "out_dir", "seed", "format")
    }
    if args.integration is not None:
        overrides["integration"] = _INTEGRATION[args.integration]
    if "integration" in file_values:
        file_values["integration"] = _INTEGRATION.get(file_values["integration"], file_values["integration"])
    return merge_config(file_values, overrides)


def _load(path, kind, cfg):
    sets = parse_score_file(path, kind=kind)
    if cfg.bounds is not None:
        sets = {k: normalize_scores(s, cfg.bounds) for k, s in sets.items()}
    return sets


def _pair(cfg):
    if cfg.id_file is None:
        raise MissingDataset("--id is required")
    id_sets = _load(cfg.id_file, Kind.ID, cfg)
    if cfg.test_files:
        if len(cfg.test_files) != 1:
            raise InvalidSpec("exactly one --ood file expected for a single pair")
        ood = _load(cfg.test_files[0], Kind.OOD, cfg).get(Kind.OOD)
    else:
        ood = id_sets.get(Kind.OOD)
    id_ = id_sets.get(Kind.ID)
    if id_ is None or ood is None:
        raise MissingDataset("need ID and OOD scores (--ood, or a labeled --id file with both)")
    return id_, ood


def _settings(cfg):
    return dict(
        weight_fpr=float(cfg.weight_fpr),
        integration=cfg.integration,
        rule=DecisionRule(cfg.rule),
        conv=Convention(cfg.convention),
    )


def _emit(text, cfg, filename):
    if cfg.out_dir:
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / filename, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    sys.stdout.write(text)


def cmd_eval(args):
    cfg = _config(args)
    id_, ood = _pair(cfg)
    s = _settings(cfg)
    policies = []
    for policy in (ThresholdPolicy.at_test(), ThresholdPolicy.at_tnr(cfg.tnr_level)):
        policies.append((policy, select_threshold(policy, id_, test_ood=ood, rule=s["rule"])))
    report = evaluate_pair(id_, ood, policies, **s)
    ext = "json" if cfg.format == "json" else "md"
    _emit(render_pair_report(report, cfg.format, cfg.to_dict()), cfg, f"report.{ext}")


def cmd_bench(args):
    cfg = _config(args)
    if cfg.id_file is None:
        raise MissingDataset("--id is required")
    if not cfg.test_files:
        raise MissingDataset("at least one --ood file is required")
    id_ = _load(cfg.id_file, Kind.ID, cfg)[Kind.ID]
    val = _load(cfg.val_file, Kind.OOD, cfg)[Kind.OOD] if cfg.val_file else None
    tests = [_load(f, Kind.OOD, cfg)[Kind.OOD] for f in cfg.test_files]
    report = run_benchmark(
        id_, val, tests, cfg.tnr_level, workers=args.workers, settings=cfg.to_dict(), **_settings(cfg)
    )
    ext = "json" if cfg.format == "json" else "md"
    _emit(render_report(report, cfg.format), cfg, f"report.{ext}")
    if cfg.out_dir:
        s = _settings(cfg)
        for i, ood in enumerate(tests):
            export_curves(
                id_, ood, Path(cfg.out_dir) / "curves" / f"{i:02d}_{ood.name}",
                rule=s["rule"], conv=s["conv"], max_points=args.curve_points or None,
            )


def cmd_curves(args):
    cfg = _config(args)
    if not cfg.out_dir:
        raise InvalidSpec("--out is required for curves")
    id_, ood = _pair(cfg)
    s = _settings(cfg)
    for p in export_curves(id_, ood, cfg.out_dir, bins=args.bins, rule=s["rule"], conv=s["conv"]):
        print(p)


def cmd_synth(args):
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.preset:
        id_, ood = sample_preset(args.preset, args.n, args.seed)
        targets = [("id", id_), ("ood", ood)]
    else:
        try:
            obj = json.loads(Path(args.spec).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise InvalidSpec(f"{args.spec}: invalid JSON ({exc.msg})") from None
        if isinstance(obj, dict) and "sets" in obj:
            specs = [(name, SynthSpec.from_dict(s)) for name, s in obj["sets"].items()]
        else:
            specs = [(args.name, SynthSpec.from_dict(obj))]
        targets = [(name, sample_scores(spec, args.n, args.seed + i, name)) for i, (name, spec) in enumerate(specs)]
    for name, s in targets:
        path = out / f"{name}.csv"
        write_score_file(path, s, CSV_SINGLE)
        print(path)


def cmd_selftest(args):
    checks = check_combination_identity()
    for c in checks:
        print(f"{'PASS' if c.ok else 'FAIL'} {c.label}: {c.detail}")
    failed = sum(not c.ok for c in checks)
    if failed:
        raise OodEvalError(f"{failed} fixture check(s) failed")


COMMANDS = {
    "eval": cmd_eval,
    "bench": cmd_bench,
    "curves": cmd_curves,
    "synth": cmd_synth,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except (OodEvalError, OSError, ValueError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"oodeval: error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
