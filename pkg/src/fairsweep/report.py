"""Frontier tables and the markdown exploration report.

Tables hold raw cell values and render to RFC 4180 CSV (6 decimal
places), JSON bytes, or markdown (3 decimal places). The report body
carries no timestamps, so identical inputs give identical bytes.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .grid import EvaluationRecord
from .metrics import METRIC_IDS
from .models import FAMILIES, HYPERPARAM_ORDER
from .pareto import ObjectivePair, ParetoSet, extract_frontier, objective_values

CSV_DECIMALS = 6
REPORT_DECIMALS = 3


class ReportError(ValueError):
    """Report requested over an empty or unusable record set."""


@dataclass(frozen=True)
class ParetoTable:
    """One frontier as a rectangular table.

    Columns: accuracy, one score per metric, the hyperparameters (union
    across the families present, declaration order), family. Cells are
    raw values; rendering applies the format.
    """

    columns: tuple[str, ...]
    rows: tuple[tuple, ...]

    def to_csv_bytes(self) -> bytes:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_csv_cell(v) for v in row])
        return buf.getvalue().encode("utf-8")

    def to_json_bytes(self) -> bytes:
        doc = {"columns": list(self.columns), "rows": [list(r) for r in self.rows]}
        return json_bytes(doc)

    def to_markdown(self) -> str:
        lines = ["| " + " | ".join(self.columns) + " |"]
        lines.append("|" + "|".join(" --- " for _ in self.columns) + "|")
        for row in self.rows:
            lines.append("| " + " | ".join(_md_cell(v) for v in row) + " |")
        return "\n".join(lines)


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.{CSV_DECIMALS}f}"
    return str(v)


def _md_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.{REPORT_DECIMALS}f}"
    return str(v)


def json_bytes(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")


def _hyperparam_union(families) -> list[str]:
    out: list[str] = []
    for family in FAMILIES:
        if family not in families:
            continue
        for name in HYPERPARAM_ORDER[family]:
            if name not in out:
                out.append(name)
    return out


def build_table(pset: ParetoSet, metric_ids=METRIC_IDS) -> ParetoTable:
    """Tabulate a frontier, one row per member in frontier order."""
    families = {r.family for r in pset.members}
    if pset.family is not None:
        families = {pset.family}
    hp_names = _hyperparam_union(families)
    columns = (
        ["accuracy"]
        + [f"{m}_score" for m in metric_ids]
        + hp_names
        + ["family"]
    )
    rows = []
    for r in pset.members:
        row = [r.accuracy.mean if r.accuracy else None]
        for m in metric_ids:
            agg = r.metrics.get(m)
            row.append(agg.score_mean if agg is not None else None)
        for name in hp_names:
            if name in r.assignment.values:
                row.append(r.assignment[name])
            else:
                row.append(None)
        row.append(r.family)
        rows.append(tuple(row))
    return ParetoTable(columns=tuple(columns), rows=tuple(rows))


def frontier_filename(family: str | None, metric_id: str) -> str:
    """One frontier's CSV name; pooled sets use the all_families token."""
    token = family if family is not None else "all_families"
    return f"{token}_{metric_id}_frontier.csv"


def _endpoints(pset: ParetoSet):
    """(most accurate, fairest) coordinates, or None for an empty set."""
    coords = pset.coordinates()
    if not coords:
        return None
    most_accurate = max(coords, key=lambda c: (c[0], c[1]))
    fairest = max(coords, key=lambda c: (c[1], c[0]))
    return most_accurate, fairest


def generate_report(
    records,
    metric_ids=METRIC_IDS,
    mode: str = "weak",
    config_json: bytes = b"{}",
    accuracy_objective: str = "accuracy",
) -> str:
    """Markdown report: configuration echo, grid summary, every
    per-family and pooled frontier table, and the endpoint trade-off of
    each frontier."""
    records = list(records)
    if not records:
        raise ReportError("no evaluation records to report on")
    metric_ids = tuple(metric_ids)

    lines: list[str] = ["# Exploration report", ""]
    lines += ["## Configuration", "", "```json", config_json.decode("utf-8"), "```", ""]

    lines += ["## Grid", ""]
    lines.append("| family | assignments | usable |")
    lines.append("| --- | --- | --- |")
    families_present = [f for f in FAMILIES if any(r.family == f for r in records)]
    for family in families_present:
        subset = [r for r in records if r.family == family]
        usable = sum(1 for r in subset if r.usable)
        lines.append(f"| {family} | {len(subset)} | {usable} |")
    lines.append("")

    undefined_by_metric = {
        m: sum(1 for r in records if r.usable and not r.metrics[m].defined)
        for m in metric_ids
    }
    flagged = {m: k for m, k in undefined_by_metric.items() if k}
    if flagged or any(not r.usable for r in records):
        lines += ["## Warnings", ""]
        unusable = sum(1 for r in records if not r.usable)
        if unusable:
            lines.append(f"- {unusable} assignment(s) failed on every split and were dropped")
        for m, k in flagged.items():
            lines.append(f"- {m}: undefined for {k} record(s); those records are excluded from its frontiers")
        lines.append("")

    def emit(pset: ParetoSet, title: str):
        lines.append(f"### {title}")
        lines.append("")
        table = build_table(pset, metric_ids)
        if table.rows:
            lines.append(table.to_markdown())
        else:
            lines.append("(empty frontier)")
        lines.append("")
        ends = _endpoints(pset)
        if ends is not None:
            (ax, ay), (fx, fy) = ends
            da = fx - ax
            df = fy - ay
            lines.append(
                f"Endpoint trade-off (most accurate to fairest): "
                f"accuracy {da:+.{REPORT_DECIMALS}f}, fairness score {df:+.{REPORT_DECIMALS}f}"
            )
        if pset.excluded_undefined:
            lines.append(f"Excluded records with undefined objectives: {pset.excluded_undefined}")
        lines.append("")

    lines += ["## Frontiers by family", ""]
    for m in metric_ids:
        pair = ObjectivePair(x=accuracy_objective, y=m)
        for pset in extract_frontier(records, pair, mode=mode, grouping="per_family"):
            emit(pset, f"{pset.family} / {m}")

    lines += ["## Frontiers across all families", ""]
    for m in metric_ids:
        pair = ObjectivePair(x=accuracy_objective, y=m)
        for pset in extract_frontier(records, pair, mode=mode, grouping="all_families"):
            emit(pset, f"all families / {m}")

    return "\n".join(lines)
