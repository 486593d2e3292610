"""Accuracy and group-fairness metrics for binary classifiers.

All metrics are computed from per-group confusion counts over three
equal-length 0/1 vectors: true labels, predicted labels, and group
membership. Each fairness metric is reported as an absolute between-group
gap in [0, 1] (lower is fairer) together with a score = 1 - gap (higher
is fairer). A gap whose underlying per-group rate has a zero denominator
is undefined and reported as None rather than silently imputed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

METRIC_IDS = (
    "statistical_parity",
    "predictive_parity",
    "predictive_equality",
    "equal_opportunity",
    "accuracy_equality",
    "equalized_odds",
)

RATE_IDS = ("selection", "tpr", "fpr", "ppv", "accuracy")


class MetricError(ValueError):
    """Invalid input to a metric computation."""


@dataclass(frozen=True)
class GroupCounts:
    """Confusion counts for a single group."""

    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def n(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def rate(self, rate_id: str) -> float | None:
        """Per-group rate, or None when its denominator is zero."""
        if rate_id == "selection":
            return _ratio(self.tp + self.fp, self.n)
        if rate_id == "tpr":
            return _ratio(self.tp, self.tp + self.fn)
        if rate_id == "fpr":
            return _ratio(self.fp, self.fp + self.tn)
        if rate_id == "ppv":
            return _ratio(self.tp, self.tp + self.fp)
        if rate_id == "accuracy":
            return _ratio(self.tp + self.tn, self.n)
        raise MetricError(f"unknown rate id: {rate_id!r}")


@dataclass(frozen=True)
class GroupConfusion:
    """Confusion counts split by sensitive group (0 and 1)."""

    g0: GroupCounts
    g1: GroupCounts

    @property
    def n(self) -> int:
        return self.g0.n + self.g1.n

    def group(self, g: int) -> GroupCounts:
        return self.g0 if g == 0 else self.g1


@dataclass(frozen=True)
class MetricVector:
    """Accuracy plus the requested fairness gaps for one prediction set.

    ``gaps`` maps metric id to the absolute gap, or None when undefined.
    Scores are derived as 1 - gap. Per-group rates are retained so signed
    differences stay recoverable downstream.
    """

    accuracy: float
    balanced_accuracy: float | None
    gaps: dict[str, float | None]
    group_rates: dict[int, dict[str, float | None]]

    def score(self, metric_id: str) -> float | None:
        gap = self.gaps[metric_id]
        return None if gap is None else 1.0 - gap


def _ratio(num: int, den: int) -> float | None:
    return None if den == 0 else num / den


def _check_binary(name: str, v: np.ndarray) -> np.ndarray:
    arr = np.asarray(v)
    if arr.ndim != 1:
        raise MetricError(f"{name} must be one-dimensional")
    vals = np.unique(arr)
    if not np.all(np.isin(vals, (0, 1))):
        raise MetricError(f"{name} contains values outside {{0, 1}}")
    return arr.astype(np.int64)


def confusion_by_group(y_true, y_pred, s) -> GroupConfusion:
    """Partition rows into per-group confusion counts.

    The three vectors must have equal length and contain only 0/1 values.
    """
    yt = _check_binary("y_true", y_true)
    yp = _check_binary("y_pred", y_pred)
    sg = _check_binary("s", s)
    if not (len(yt) == len(yp) == len(sg)):
        raise MetricError(
            f"length mismatch: y_true={len(yt)}, y_pred={len(yp)}, s={len(sg)}"
        )
    groups = []
    for g in (0, 1):
        m = sg == g
        groups.append(
            GroupCounts(
                tp=int(np.sum(m & (yt == 1) & (yp == 1))),
                fp=int(np.sum(m & (yt == 0) & (yp == 1))),
                fn=int(np.sum(m & (yt == 1) & (yp == 0))),
                tn=int(np.sum(m & (yt == 0) & (yp == 0))),
            )
        )
    return GroupConfusion(g0=groups[0], g1=groups[1])


_GAP_RATE = {
    "statistical_parity": "selection",
    "predictive_parity": "ppv",
    "predictive_equality": "fpr",
    "equal_opportunity": "tpr",
    "accuracy_equality": "accuracy",
}


def fairness_gap(c: GroupConfusion, metric_id: str) -> float | None:
    """Absolute between-group gap for one metric, or None when undefined.

    Raises MetricError when either group has no rows at all; an empty
    group makes every group comparison meaningless, not just one metric.
    """
    if metric_id not in METRIC_IDS:
        raise MetricError(f"unknown metric id: {metric_id!r}")
    for g in (0, 1):
        if c.group(g).n == 0:
            raise MetricError(f"group {g} has zero rows")
    if metric_id == "equalized_odds":
        tpr_gap = fairness_gap(c, "equal_opportunity")
        fpr_gap = fairness_gap(c, "predictive_equality")
        if tpr_gap is None or fpr_gap is None:
            return None
        return max(tpr_gap, fpr_gap)
    rate_id = _GAP_RATE[metric_id]
    r0 = c.g0.rate(rate_id)
    r1 = c.g1.rate(rate_id)
    if r0 is None or r1 is None:
        return None
    return abs(r0 - r1)


def evaluate_predictions(y_true, y_pred, s, metric_ids=METRIC_IDS) -> MetricVector:
    """Compute accuracy and the requested fairness gaps in one pass."""
    c = confusion_by_group(y_true, y_pred, s)
    if c.n == 0:
        raise MetricError("no rows to evaluate")
    for metric_id in metric_ids:
        if metric_id not in METRIC_IDS:
            raise MetricError(f"unknown metric id: {metric_id!r}")
    tp = c.g0.tp + c.g1.tp
    tn = c.g0.tn + c.g1.tn
    fp = c.g0.fp + c.g1.fp
    fn = c.g0.fn + c.g1.fn
    accuracy = (tp + tn) / c.n
    tpr_all = _ratio(tp, tp + fn)
    tnr_all = _ratio(tn, tn + fp)
    balanced = None if tpr_all is None or tnr_all is None else (tpr_all + tnr_all) / 2
    gaps = {m: fairness_gap(c, m) for m in metric_ids}
    rates = {
        g: {r: c.group(g).rate(r) for r in RATE_IDS} for g in (0, 1)
    }
    return MetricVector(
        accuracy=accuracy,
        balanced_accuracy=balanced,
        gaps=gaps,
        group_rates=rates,
    )
