"""Headless driver: run a full exploration from flags or a config file
and write records, frontier CSVs, and the report to an output directory.

The config file uses the same JSON schema the HTTP service accepts;
flags override individual fields. Exit codes: 0 success, 1 invalid
input, 2 runtime failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .data import DataError
from .grid import GridError, ProgressSink
from .models import FAMILIES
from .pareto import ObjectivePair, ParetoError, extract_frontier
from .pipeline import (
    ConfigError,
    canonical_config,
    config_json_bytes,
    exploration_task_total,
    prepare_dataset,
    records_json_bytes,
    run_exploration,
)
from .report import build_table, frontier_filename, generate_report

FAMILY_ALIASES = {
    "dt": "decision_tree",
    "rf": "random_forest",
    "lr": "logistic_regression",
    "svc": "svc",
}

BAR_WIDTH = 30


def render_progress(completed: int, total: int, width: int = BAR_WIDTH) -> str:
    """One line of progress bar, e.g. `[###---] 12/24 ( 50%)`."""
    frac = completed / total if total > 0 else 1.0
    filled = int(round(frac * width))
    bar = "#" * filled + "-" * (width - filled)
    return f"[{bar}] {completed}/{total} ({frac:4.0%})"


def _split_list(tokens: list[str]) -> list[str]:
    # accept both `--models lr svc` and `--models lr,svc`
    out = []
    for tok in tokens:
        out.extend(t for t in tok.split(",") if t)
    return out


def _resolve_family(token: str) -> str:
    return FAMILY_ALIASES.get(token, token)


def build_parser() -> argparse.ArgumentParser:
    root = argparse.ArgumentParser(
        prog="fairsweep",
        description=(
            "Train classifier families over full hyperparameter grids, "
            "score accuracy and group-fairness metrics across repeated "
            "splits, and extract Pareto frontiers."
        ),
    )
    sub = root.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="run an exploration and write records, frontiers, report")
    p.add_argument("--config", type=Path, help="JSON config file (service schema)")
    p.add_argument("--data", type=Path, help="CSV data file")
    p.add_argument("--target", help="target column name")
    p.add_argument("--positive", nargs="+", help="target values counted as the positive class")
    p.add_argument("--negative", nargs="+", help="optional explicit negative values")
    p.add_argument("--sensitive", help="sensitive attribute column name")
    p.add_argument("--group0", nargs="+", help="sensitive values forming group 0")
    p.add_argument("--group1", nargs="+", help="optional explicit group 1 values")
    p.add_argument(
        "--models",
        nargs="+",
        help=f"model families ({', '.join(FAMILIES)}; aliases dt rf lr svc)",
    )
    p.add_argument("--metrics", nargs="+", help="fairness metric ids")
    p.add_argument("--splits", type=int, help="number of repeated splits")
    p.add_argument("--seed", type=int, help="run seed")
    p.add_argument("--mode", choices=("weak", "strict"), help="dominance mode")
    p.add_argument("--workers", type=int, help="parallel training workers")
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--report", type=Path, help="report path (default <out>/report.md)")
    return root


def _merge_config(args) -> dict:
    doc: dict = {}
    if args.config is not None:
        try:
            doc = json.loads(args.config.read_text(encoding="utf-8"))
        except OSError as e:
            raise ConfigError([f"config file: {e}"])
        except json.JSONDecodeError as e:
            raise ConfigError([f"config file is not valid JSON: {e}"])
        if not isinstance(doc, dict):
            raise ConfigError(["config file: expected a JSON object"])
    data = dict(doc.get("data", {}))
    task = dict(data.get("task", {}))
    if args.target is not None:
        task["target"] = args.target
    if args.positive is not None:
        task["positive_values"] = args.positive
    if args.negative is not None:
        task["negative_values"] = args.negative
    if args.sensitive is not None:
        task["sensitive"] = args.sensitive
    if args.group0 is not None:
        task["group0_values"] = args.group0
    if args.group1 is not None:
        task["group1_values"] = args.group1
    if task:
        data["task"] = task
    if data:
        doc["data"] = data
    if args.models is not None:
        doc["families"] = [_resolve_family(m) for m in _split_list(args.models)]
    if args.metrics is not None:
        doc["metrics"] = _split_list(args.metrics)
    if args.splits is not None:
        doc.setdefault("split", {})
        doc["split"] = dict(doc["split"])
        doc["split"]["n_splits"] = args.splits
    if args.seed is not None:
        doc["seed"] = args.seed
    if args.mode is not None:
        doc["mode"] = args.mode
    if args.workers is not None:
        doc["workers"] = args.workers
    return doc


def _write_outputs(out_dir: Path, report_path, canonical, records) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    records_path = out_dir / "records.json"
    records_path.write_bytes(records_json_bytes(records))
    written.append(records_path)
    metric_ids = tuple(canonical["metrics"])
    mode = canonical["mode"]
    x = canonical["accuracy_objective"]
    multi_family = len(canonical["families"]) > 1
    for m in metric_ids:
        pair = ObjectivePair(x=x, y=m)
        for pset in extract_frontier(records, pair, mode=mode, grouping="per_family"):
            path = out_dir / frontier_filename(pset.family, m)
            path.write_bytes(build_table(pset, metric_ids).to_csv_bytes())
            written.append(path)
        if multi_family:
            pooled = extract_frontier(records, pair, mode=mode, grouping="all_families")[0]
            path = out_dir / frontier_filename(None, m)
            path.write_bytes(build_table(pooled, metric_ids).to_csv_bytes())
            written.append(path)
    text = generate_report(
        records,
        metric_ids=metric_ids,
        mode=mode,
        config_json=config_json_bytes(canonical),
        accuracy_objective=x,
    )
    report_path = report_path or (out_dir / "report.md")
    report_path.parent.mkdir(parents=True, exist_ok=True)
    report_path.write_text(text, encoding="utf-8")
    written.append(report_path)
    return written


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = _merge_config(args)
        canonical = canonical_config(doc)
        if args.data is None:
            print("error: --data is required (no data file in config)", file=sys.stderr)
            return 1
        if not args.data.is_file():
            print(f"error: data file not found: {args.data}", file=sys.stderr)
            return 1
        dataset = prepare_dataset(args.data, canonical)
    except (ConfigError, DataError, GridError, ParetoError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # noqa: BLE001 - report, then signal runtime failure
        print(f"runtime failure: {e}", file=sys.stderr)
        return 2

    total = exploration_task_total(canonical)
    show_bar = sys.stderr.isatty()

    def on_change(done, t):
        if show_bar:
            sys.stderr.write("\r" + render_progress(done, t))
            sys.stderr.flush()

    sink = ProgressSink(total=total, on_change=on_change)
    try:
        records = run_exploration(dataset, canonical, progress=sink)
        if show_bar:
            sys.stderr.write("\r" + render_progress(total, total) + "\n")
        written = _write_outputs(args.out, args.report, canonical, records)
    except (ConfigError, DataError, GridError, ParetoError) as e:
        if show_bar:
            sys.stderr.write("\n")
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # noqa: BLE001 - report, then signal runtime failure
        if show_bar:
            sys.stderr.write("\n")
        print(f"runtime failure: {e}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
