"""Hyperparameter space and sweep runner tests."""
from __future__ import annotations

import threading

import numpy as np
import pytest

from fairsweep import models
from fairsweep.data import SplitPlan, make_splits
from fairsweep.grid import (
    EvaluationRecord,
    GridError,
    HyperparamSpace,
    ProgressSink,
    default_space,
    derive_seed,
    expand,
    grid_size,
    run_grid,
    validate_space,
)
from fairsweep.metrics import evaluate_predictions
from fairsweep.models import TrainingError

from conftest import biased_csv, encode_csv

FIVE_METRICS = (
    "predictive_parity", "predictive_equality", "equal_opportunity",
    "accuracy_equality", "equalized_odds",
)


@pytest.mark.parametrize(
    "family,count",
    [("decision_tree", 432), ("random_forest", 864),
     ("logistic_regression", 14), ("svc", 28)],
)
def test_default_space_cardinality(family, count):
    space = default_space(family)
    assert grid_size(space) == count
    assert len(expand(space)) == count


def test_expand_order_is_lexicographic_in_declaration_order():
    assignments = expand(default_space("logistic_regression"))
    assert assignments[0]["C"] == 0.001
    assert assignments[0]["penalty"] == "l2"
    assert assignments[1]["C"] == 0.001
    assert assignments[1]["penalty"] == "none"
    assert assignments[2]["C"] == 0.01
    # last varies slowest on the first declared hyperparameter
    assert assignments[-1]["C"] == 1000


def test_validate_space_reports_each_violation():
    s = HyperparamSpace.from_dict(
        "logistic_regression", {"C": [0, 1, 1], "penalty": ["l2", "ridge"]}
    )
    violations = validate_space(s)
    joined = "\n".join(violations)
    assert "C must be > 0" in joined
    assert "duplicate value 1" in joined
    assert "penalty" in joined


def test_validate_space_empty_range_and_unknown_name():
    s = HyperparamSpace.from_dict(
        "svc", {"C": [], "kernel": ["linear"], "shrinking": [True]}
    )
    violations = "\n".join(validate_space(s))
    assert "empty range" in violations
    assert "shrinking" in violations


def test_validate_space_missing_hyperparameter():
    s = HyperparamSpace(family="svc", values=(("C", (1,)), ("kernel", ())))
    assert any("empty range" in v for v in validate_space(s))
    s2 = HyperparamSpace(family="svc", values=(("C", (1,)),))
    assert any("missing hyperparameter 'kernel'" in v for v in validate_space(s2))


def test_expand_rejects_invalid_space():
    s = HyperparamSpace.from_dict("logistic_regression", {"C": [0], "penalty": ["l2"]})
    with pytest.raises(GridError):
        expand(s)


def test_expansion_cap():
    s = HyperparamSpace.from_dict(
        "logistic_regression",
        {"C": [float(i + 1) for i in range(100)], "penalty": ["l2", "none"]},
    )
    assert len(expand(s, cap=200)) == 200
    with pytest.raises(GridError, match="cap"):
        expand(s, cap=199)


def test_derive_seed_stable_and_distinct():
    a = derive_seed(0, 1, 2)
    assert a == derive_seed(0, 1, 2)
    others = {derive_seed(0, i, j) for i in range(20) for j in range(10)}
    assert len(others) == 200
    assert derive_seed(1, 1, 2) != a


def test_progress_sink_counts_and_fraction():
    seen = []
    sink = ProgressSink(total=6, on_change=lambda done, total: seen.append(done))
    for _ in range(6):
        sink.tick()
    assert sink.completed == 6
    assert sink.fraction == 1.0
    assert seen == [1, 2, 3, 4, 5, 6]


def test_progress_sink_threaded_ticks_exact():
    sink = ProgressSink(total=400)
    threads = [
        threading.Thread(target=lambda: [sink.tick() for _ in range(100)])
        for _ in range(4)
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert sink.completed == 400


@pytest.fixture(scope="module")
def small_encoded():
    return encode_csv(biased_csv(220, seed=13))


def _lr_space(cs):
    return HyperparamSpace.from_dict(
        "logistic_regression", {"C": cs, "penalty": ["l2"]}
    )


def test_run_grid_tick_count(small_encoded):
    sink = ProgressSink(total=6)
    run_grid(
        small_encoded, _lr_space([0.1, 10]), SplitPlan(n_splits=3, seed=2),
        seed=2, progress=sink,
    )
    assert sink.completed == 6
    assert sink.total == 6


def test_run_grid_record_order_matches_expand(small_encoded):
    space = _lr_space([0.001, 1, 1000])
    records = run_grid(small_encoded, space, SplitPlan(n_splits=2, seed=0), seed=0)
    assert [r.assignment["C"] for r in records] == [0.001, 1, 1000]
    assert all(r.family == "logistic_regression" for r in records)


def test_run_grid_matches_manual_loop(small_encoded):
    """Re-derive one record with a hand-rolled loop over the same
    splits and per-task seeds."""
    space = _lr_space([10])
    plan = SplitPlan(n_splits=3, seed=5)
    record = run_grid(
        small_encoded, space, plan, metric_ids=FIVE_METRICS, seed=5
    )[0]

    splits = make_splits(small_encoded, plan)
    X, _ = small_encoded.feature_matrix()
    y = np.asarray(small_encoded.target)
    s = np.asarray(small_encoded.sensitive)
    assignment = expand(space)[0]
    accs, gaps = [], []
    for si, (train_idx, test_idx) in enumerate(splits):
        m = models.train(X[train_idx], y[train_idx], assignment, derive_seed(5, 0, si))
        y_pred = models.predict(m, X[test_idx])
        mv = evaluate_predictions(y[test_idx], y_pred, s[test_idx], FIVE_METRICS)
        accs.append(mv.accuracy)
        gaps.append(mv.gaps["equal_opportunity"])
    assert record.accuracy.mean == pytest.approx(np.mean(accs), abs=1e-15)
    assert record.accuracy.variance == pytest.approx(np.var(accs), abs=1e-15)
    if all(g is not None for g in gaps):
        agg = record.metrics["equal_opportunity"]
        assert agg.gap_mean == pytest.approx(np.mean(gaps), abs=1e-15)
        assert agg.score_mean == pytest.approx(1 - np.mean(gaps), abs=1e-15)


def test_run_grid_worker_counts_agree(small_encoded):
    from fairsweep.pipeline import records_json_bytes

    space = HyperparamSpace.from_dict(
        "decision_tree",
        {"criterion": ["gini", "entropy"], "max_features": ["none", "sqrt"],
         "min_samples_split": [2], "min_samples_leaf": [1, 8],
         "class_weight": ["none"]},
    )
    plan = SplitPlan(n_splits=3, seed=1)
    serial = run_grid(small_encoded, space, plan, seed=1, workers=1)
    pooled = run_grid(small_encoded, space, plan, seed=1, workers=6)
    assert records_json_bytes(serial) == records_json_bytes(pooled)


def test_run_grid_partial_split_failure(small_encoded, monkeypatch):
    space = _lr_space([0.1, 10])
    plan = SplitPlan(n_splits=3, seed=4)
    bad = {derive_seed(4, ai, 1) for ai in range(2)}
    real_train = models.train

    def flaky_train(X, y, assignment, seed, **kw):
        if seed in bad:
            raise TrainingError("synthetic failure")
        return real_train(X, y, assignment, seed, **kw)

    monkeypatch.setattr(models, "train", flaky_train)
    records = run_grid(small_encoded, space, plan, seed=4)
    for r in records:
        assert r.failed_splits == (1,)
        assert r.usable
        assert r.n_splits == 3
    # a different run seed derives task seeds outside the poisoned set
    clean = run_grid(small_encoded, _lr_space([0.1]), plan, seed=99)
    assert clean[0].failed_splits == ()


def test_run_grid_total_failure_unusable(small_encoded, monkeypatch):
    def always_fails(*a, **kw):
        raise TrainingError("synthetic failure")

    monkeypatch.setattr(models, "train", always_fails)
    records = run_grid(
        small_encoded, _lr_space([1]), SplitPlan(n_splits=2, seed=0), seed=0
    )
    assert not records[0].usable
    assert records[0].failed_splits == (0, 1)
    assert records[0].accuracy is None


def test_on_model_callback_sees_every_fit(small_encoded):
    seen = []
    run_grid(
        small_encoded, _lr_space([0.1, 10]), SplitPlan(n_splits=2, seed=3),
        seed=3, on_model=lambda ai, si, m: seen.append((ai, si, m.family)),
    )
    assert sorted(seen) == [
        (0, 0, "logistic_regression"), (0, 1, "logistic_regression"),
        (1, 0, "logistic_regression"), (1, 1, "logistic_regression"),
    ]


def test_record_json_round_trip(small_encoded):
    record = run_grid(
        small_encoded, _lr_space([1]), SplitPlan(n_splits=2, seed=6), seed=6,
        metric_ids=FIVE_METRICS,
    )[0]
    back = EvaluationRecord.from_json_dict(record.to_json_dict())
    assert back.assignment == record.assignment
    assert back.accuracy == record.accuracy
    assert back.metrics == record.metrics
    assert back.group_rates == record.group_rates
    assert back.to_json_dict() == record.to_json_dict()


def test_objective_value_lookup(small_encoded):
    record = run_grid(
        small_encoded, _lr_space([1]), SplitPlan(n_splits=2, seed=0), seed=0
    )[0]
    assert record.objective_value("accuracy") == record.accuracy.mean
    assert record.objective_value("balanced_accuracy") == record.balanced_accuracy.mean
    sp = record.metrics["statistical_parity"]
    assert record.objective_value("statistical_parity") == sp.score_mean
    assert record.objective_value("no_such_metric") is None
