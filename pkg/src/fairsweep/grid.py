"""Hyperparameter spaces, full-factorial expansion, and the sweep runner.

A HyperparamSpace holds the admissible value list for every
hyperparameter of one family. expand() produces the Cartesian product in
a deterministic lexicographic order, and run_grid() trains and evaluates
every (assignment, split) pair, aggregating mean and population variance
per objective. Per-task seeds are derived by hashing (run seed,
assignment index, split index), so serial and parallel execution give
identical results.
"""
from __future__ import annotations

import hashlib
import itertools
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import models
from .data import Dataset, SplitPlan, make_splits
from .metrics import METRIC_IDS, RATE_IDS, MetricVector, evaluate_predictions
from .models import HyperparamAssignment, ModelError, TrainingError

DEFAULT_EXPANSION_CAP = 10**6

TABLE_DEFAULTS = {
    "decision_tree": {
        "criterion": ["gini", "entropy"],
        "max_features": ["none", "sqrt", "log2"],
        "min_samples_split": [2, 4, 8, 12, 16, 20],
        "min_samples_leaf": [1, 4, 8, 12, 16, 20],
        "class_weight": ["none", "balanced"],
    },
    "logistic_regression": {
        "C": [0.001, 0.01, 0.1, 1, 10, 100, 1000],
        "penalty": ["l2", "none"],
    },
    "svc": {
        "C": [0.001, 0.01, 0.1, 1, 10, 100, 1000],
        "kernel": ["linear", "poly", "rbf", "sigmoid"],
    },
}
TABLE_DEFAULTS["random_forest"] = {
    **TABLE_DEFAULTS["decision_tree"],
    "bootstrap": [False, True],
}


class GridError(ValueError):
    """Invalid space or sweep configuration."""


@dataclass(frozen=True)
class HyperparamSpace:
    """Ordered value lists for every hyperparameter of one family."""

    family: str
    values: tuple[tuple[str, tuple], ...]

    @staticmethod
    def from_dict(family: str, mapping) -> "HyperparamSpace":
        if family not in models.FAMILIES:
            raise GridError(f"unknown model family: {family!r}")
        order = models.HYPERPARAM_ORDER[family]
        pairs = []
        for name in order:
            vals = mapping.get(name)
            pairs.append((name, tuple(vals) if vals is not None else ()))
        for name in mapping:
            if name not in order:
                pairs.append((name, tuple(mapping[name])))
        return HyperparamSpace(family=family, values=tuple(pairs))

    def to_json_dict(self) -> dict:
        return {name: list(vals) for name, vals in self.values}


def default_space(family: str) -> HyperparamSpace:
    """The stock search space for one family."""
    if family not in models.FAMILIES:
        raise GridError(f"unknown model family: {family!r}")
    return HyperparamSpace.from_dict(family, TABLE_DEFAULTS[family])


def validate_space(s: HyperparamSpace) -> list[str]:
    """Feasibility check; returns a list of violations (empty = ok)."""
    violations: list[str] = []
    if s.family not in models.FAMILIES:
        return [f"unknown model family: {s.family!r}"]
    expected = models.HYPERPARAM_ORDER[s.family]
    declared = [name for name, _ in s.values]
    for name in expected:
        if name not in declared:
            violations.append(f"{s.family}: missing hyperparameter {name!r}")
    for name, vals in s.values:
        if name not in expected:
            violations.append(f"{s.family}: unknown hyperparameter {name!r}")
            continue
        if len(vals) == 0:
            violations.append(f"{s.family}.{name}: empty range")
            continue
        seen = []
        for v in vals:
            if v in seen:
                violations.append(f"{s.family}.{name}: duplicate value {v!r}")
            seen.append(v)
            problem = models._check_value(s.family, name, v)
            if problem:
                violations.append(f"{s.family}.{name}: {problem}")
    return violations


def expand(s: HyperparamSpace, cap: int = DEFAULT_EXPANSION_CAP) -> list[HyperparamAssignment]:
    """Full factorial of the space, lexicographic in declaration order."""
    violations = validate_space(s)
    if violations:
        raise GridError("invalid space: " + "; ".join(violations))
    names = [name for name, _ in s.values]
    lists = [vals for _, vals in s.values]
    size = 1
    for vals in lists:
        size *= len(vals)
    if size > cap:
        raise GridError(
            f"grid of {size} assignments exceeds the cap of {cap}; "
            f"reduce the value ranges"
        )
    out = []
    for combo in itertools.product(*lists):
        out.append(HyperparamAssignment(s.family, dict(zip(names, combo))))
    return out


def grid_size(s: HyperparamSpace) -> int:
    size = 1
    for _, vals in s.values:
        size *= len(vals)
    return size


class ProgressSink:
    """Monotone counter of completed tasks, safe to tick from any worker."""

    def __init__(self, total: int, on_change=None):
        self.total = int(total)
        self._done = 0
        self._lock = threading.Lock()
        self._on_change = on_change

    def tick(self, k: int = 1):
        with self._lock:
            self._done += k
            done = self._done
        if self._on_change is not None:
            self._on_change(done, self.total)

    def add_total(self, k: int):
        with self._lock:
            self.total += k

    @property
    def completed(self) -> int:
        with self._lock:
            return self._done

    @property
    def fraction(self) -> float:
        total = self.total
        if total <= 0:
            return 1.0
        return self.completed / total


@dataclass(frozen=True)
class MetricAggregate:
    """Mean/variance of one fairness metric's gap over splits.

    score mean = 1 - gap mean; the variance of score and gap is shared.
    A metric undefined on any split leaves the whole aggregate undefined.
    """

    gap_mean: float | None
    variance: float | None
    undefined_splits: int

    @property
    def defined(self) -> bool:
        return self.gap_mean is not None

    @property
    def score_mean(self) -> float | None:
        return None if self.gap_mean is None else 1.0 - self.gap_mean


@dataclass(frozen=True)
class ObjectiveStats:
    mean: float
    variance: float


@dataclass(frozen=True)
class EvaluationRecord:
    """Aggregated outcome of one assignment across all splits."""

    family: str
    assignment: HyperparamAssignment
    n_splits: int
    accuracy: ObjectiveStats | None
    balanced_accuracy: ObjectiveStats | None
    metrics: dict[str, MetricAggregate]
    group_rates: dict[int, dict[str, float | None]]
    failed_splits: tuple[int, ...]

    @property
    def usable(self) -> bool:
        return self.accuracy is not None

    def objective_value(self, objective: str) -> float | None:
        """Mean of a maximized objective: accuracy, balanced accuracy,
        or a fairness score."""
        if objective == "accuracy":
            return None if self.accuracy is None else self.accuracy.mean
        if objective == "balanced_accuracy":
            return None if self.balanced_accuracy is None else self.balanced_accuracy.mean
        agg = self.metrics.get(objective)
        if agg is None:
            return None
        return agg.score_mean

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "assignment": self.assignment.to_json_dict(),
            "n_splits": self.n_splits,
            "usable": self.usable,
            "failed_splits": list(self.failed_splits),
            "accuracy": _stats_dict(self.accuracy),
            "balanced_accuracy": _stats_dict(self.balanced_accuracy),
            "metrics": {
                m: {
                    "gap_mean": agg.gap_mean,
                    "score_mean": agg.score_mean,
                    "variance": agg.variance,
                    "undefined_splits": agg.undefined_splits,
                }
                for m, agg in self.metrics.items()
            },
            "group_rates": {
                str(g): dict(rates) for g, rates in self.group_rates.items()
            },
        }

    @staticmethod
    def from_json_dict(doc: dict) -> "EvaluationRecord":
        assignment = HyperparamAssignment(doc["family"], doc["assignment"])
        metrics = {
            m: MetricAggregate(
                gap_mean=v["gap_mean"],
                variance=v["variance"],
                undefined_splits=v["undefined_splits"],
            )
            for m, v in doc["metrics"].items()
        }
        return EvaluationRecord(
            family=doc["family"],
            assignment=assignment,
            n_splits=doc["n_splits"],
            accuracy=_stats_from(doc["accuracy"]),
            balanced_accuracy=_stats_from(doc["balanced_accuracy"]),
            metrics=metrics,
            group_rates={
                int(g): dict(rates) for g, rates in doc["group_rates"].items()
            },
            failed_splits=tuple(doc["failed_splits"]),
        )


def _stats_dict(s: ObjectiveStats | None):
    return None if s is None else {"mean": s.mean, "variance": s.variance}


def _stats_from(doc) -> ObjectiveStats | None:
    return None if doc is None else ObjectiveStats(mean=doc["mean"], variance=doc["variance"])


def derive_seed(seed: int, assignment_index: int, split_index: int) -> int:
    """Stable per-task seed, independent of scheduling order."""
    key = f"{seed}|{assignment_index}|{split_index}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")


def _population_stats(values) -> ObjectiveStats:
    arr = np.asarray(values, dtype=np.float64)
    return ObjectiveStats(
        mean=float(np.mean(arr)), variance=float(np.var(arr))
    )


def _aggregate(
    family: str,
    assignment: HyperparamAssignment,
    outcomes: list[MetricVector | None],
    metric_ids,
) -> EvaluationRecord:
    n_splits = len(outcomes)
    ok = [mv for mv in outcomes if mv is not None]
    failed = tuple(i for i, mv in enumerate(outcomes) if mv is None)
    if not ok:
        return EvaluationRecord(
            family=family,
            assignment=assignment,
            n_splits=n_splits,
            accuracy=None,
            balanced_accuracy=None,
            metrics={m: MetricAggregate(None, None, 0) for m in metric_ids},
            group_rates={0: {}, 1: {}},
            failed_splits=failed,
        )
    accuracy = _population_stats([mv.accuracy for mv in ok])
    bal = [mv.balanced_accuracy for mv in ok]
    balanced = _population_stats(bal) if all(b is not None for b in bal) else None
    aggregates = {}
    for m in metric_ids:
        gaps = [mv.gaps[m] for mv in ok]
        undefined = sum(1 for g in gaps if g is None)
        if undefined:
            aggregates[m] = MetricAggregate(None, None, undefined)
        else:
            stats = _population_stats(gaps)
            aggregates[m] = MetricAggregate(stats.mean, stats.variance, 0)
    group_rates = {}
    for g in (0, 1):
        rates = {}
        for r in RATE_IDS:
            vals = [mv.group_rates[g][r] for mv in ok]
            defined = [v for v in vals if v is not None]
            rates[r] = float(np.mean(defined)) if len(defined) == len(vals) else None
        group_rates[g] = rates
    return EvaluationRecord(
        family=family,
        assignment=assignment,
        n_splits=n_splits,
        accuracy=accuracy,
        balanced_accuracy=balanced,
        metrics=aggregates,
        group_rates=group_rates,
        failed_splits=failed,
    )


def run_grid(
    d: Dataset,
    s: HyperparamSpace,
    plan: SplitPlan,
    metric_ids=METRIC_IDS,
    seed: int = 0,
    progress: ProgressSink | None = None,
    workers: int = 1,
    n_forest_trees: int = models.DEFAULT_FOREST_TREES,
    on_model=None,
    splits=None,
) -> list[EvaluationRecord]:
    """Train and evaluate the full factorial of a space across splits.

    Returns one EvaluationRecord per assignment, in expand order. A
    training failure on one split flags that split and aggregates the
    rest; an assignment failing on every split is marked unusable.
    ``on_model`` (if given) receives (assignment_index, split_index,
    TrainedModel) for every successful fit. Pass ``splits`` to reuse a
    split list shared across several spaces.
    """
    assignments = expand(s)
    if splits is None:
        splits = make_splits(d, plan)
    X, _ = d.feature_matrix()
    y = np.asarray(d.target)
    groups = np.asarray(d.sensitive)

    def run_task(ai: int, si: int) -> MetricVector | None:
        train_idx, test_idx = splits[si]
        task_seed = derive_seed(seed, ai, si)
        try:
            model = models.train(
                X[train_idx],
                y[train_idx],
                assignments[ai],
                task_seed,
                n_forest_trees=n_forest_trees,
            )
            y_pred = models.predict(model, X[test_idx])
            mv = evaluate_predictions(
                y[test_idx], y_pred, groups[test_idx], metric_ids
            )
        except (TrainingError, ModelError):
            return None
        if on_model is not None:
            on_model(ai, si, model)
        return mv
    tasks = [(ai, si) for ai in range(len(assignments)) for si in range(len(splits))]
    outcomes: dict[tuple[int, int], MetricVector | None] = {}
    if workers <= 1:
        for ai, si in tasks:
            outcomes[(ai, si)] = run_task(ai, si)
            if progress is not None:
                progress.tick()
    else:
        lock = threading.Lock()

        def worker(task):
            ai, si = task
            result = run_task(ai, si)
            with lock:
                outcomes[(ai, si)] = result
            if progress is not None:
                progress.tick()

        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(worker, tasks))

    records = []
    for ai, a in enumerate(assignments):
        per_split = [outcomes[(ai, si)] for si in range(len(splits))]
        records.append(_aggregate(s.family, a, per_split, tuple(metric_ids)))
    return records
