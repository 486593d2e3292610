"""Shared fixtures: synthetic datasets and record builders."""
from __future__ import annotations

import numpy as np
import pytest

from fairsweep.data import PreprocessConfig, encode_task, load_csv, preprocess
from fairsweep.grid import EvaluationRecord, MetricAggregate, ObjectiveStats
from fairsweep.metrics import METRIC_IDS
from fairsweep.models import HYPERPARAM_ORDER, HyperparamAssignment


def biased_csv(n: int, seed: int = 0, disparity: float = 1.2, n_features: int = 3) -> bytes:
    """Synthetic binary task where group b has a shifted base rate, so
    group-aware metrics show a real gap."""
    rng = np.random.default_rng(seed)
    header = ",".join(f"f{j}" for j in range(n_features)) + ",grp,label"
    lines = [header]
    for _ in range(n):
        g = "a" if rng.random() < 0.5 else "b"
        x = rng.normal(0.0, 1.0, n_features)
        shift = disparity if g == "b" else 0.0
        logit = x[0] + 0.6 * x[1] + shift + rng.normal(0, 0.8)
        label = "yes" if logit > 0.5 else "no"
        lines.append(",".join(f"{v:.6f}" for v in x) + f",{g},{label}")
    return ("\n".join(lines) + "\n").encode()


def encode_csv(csv_bytes: bytes):
    raw = load_csv(csv_bytes)
    clean = preprocess(raw, PreprocessConfig(), exclude=("label", "grp"))
    return encode_task(clean, "label", ("yes",), "grp", ("a",))


@pytest.fixture(scope="session")
def toy_encoded():
    return encode_csv(biased_csv(240, seed=7))


def default_assignment(family: str, **overrides) -> HyperparamAssignment:
    base = {
        "decision_tree": {
            "criterion": "gini", "max_features": "none",
            "min_samples_split": 2, "min_samples_leaf": 1, "class_weight": "none",
        },
        "random_forest": {
            "criterion": "gini", "max_features": "sqrt",
            "min_samples_split": 2, "min_samples_leaf": 1, "class_weight": "none",
            "bootstrap": True,
        },
        "logistic_regression": {"C": 1, "penalty": "l2"},
        "svc": {"C": 1, "kernel": "linear"},
    }[family]
    base.update(overrides)
    assert set(base) == set(HYPERPARAM_ORDER[family])
    return HyperparamAssignment(family, base)


def synthetic_record(
    accuracy: float,
    scores: dict[str, float | None] | float,
    family: str = "logistic_regression",
    index: int = 0,
) -> EvaluationRecord:
    """Record with chosen objective values, no training involved.

    ``scores`` may be a single float applied to every metric or a dict
    of metric -> score (None marks the metric undefined).
    """
    if not isinstance(scores, dict):
        scores = {m: scores for m in METRIC_IDS}
    aggregates = {}
    for m in METRIC_IDS:
        sc = scores.get(m)
        if sc is None:
            aggregates[m] = MetricAggregate(gap_mean=None, variance=None, undefined_splits=1)
        else:
            aggregates[m] = MetricAggregate(gap_mean=1.0 - sc, variance=0.0, undefined_splits=0)
    cs = [0.001, 0.01, 0.1, 1, 10, 100, 1000]
    assignment = default_assignment(family, **(
        {"C": cs[index % len(cs)]} if family in ("logistic_regression", "svc")
        else {"min_samples_split": [2, 4, 8, 12, 16, 20][index % 6]}
    ))
    rates = {r: 0.5 for r in ("selection", "tpr", "fpr", "ppv", "accuracy")}
    return EvaluationRecord(
        family=family,
        assignment=assignment,
        n_splits=1,
        accuracy=ObjectiveStats(mean=accuracy, variance=0.0),
        balanced_accuracy=ObjectiveStats(mean=accuracy, variance=0.0),
        metrics=aggregates,
        group_rates={0: dict(rates), 1: dict(rates)},
        failed_splits=(),
    )
