"""Classifier families behind a single train/predict contract.

Four families are implemented from scratch: decision_tree (greedy CART),
random_forest (vote over seeded trees), logistic_regression, and svc
(kernel SVM). Every family trains deterministically from (data,
assignment, seed) and predicts as a pure function of the trained model.
"""
from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from . import forest, linear, svm, tree

FAMILIES = ("decision_tree", "random_forest", "logistic_regression", "svc")

# hyperparameter names per family, in declaration order
HYPERPARAM_ORDER = {
    "decision_tree": (
        "criterion",
        "max_features",
        "min_samples_split",
        "min_samples_leaf",
        "class_weight",
    ),
    "random_forest": (
        "criterion",
        "max_features",
        "min_samples_split",
        "min_samples_leaf",
        "class_weight",
        "bootstrap",
    ),
    "logistic_regression": ("C", "penalty"),
    "svc": ("C", "kernel"),
}

CLASS_WEIGHTS = ("none", "balanced")

DEFAULT_FOREST_TREES = 100


class ModelError(ValueError):
    """Invalid model configuration or training input."""


class TrainingError(ModelError):
    """Training cannot proceed on the given partition."""


def _check_value(family: str, name: str, value) -> str | None:
    if name == "criterion":
        if value not in tree.CRITERIA:
            return f"criterion must be one of {list(tree.CRITERIA)}, got {value!r}"
    elif name == "max_features":
        if value not in tree.MAX_FEATURES:
            return f"max_features must be one of {list(tree.MAX_FEATURES)}, got {value!r}"
    elif name in ("min_samples_split", "min_samples_leaf"):
        minimum = 2 if name == "min_samples_split" else 1
        if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
            return f"{name} must be an integer >= {minimum}, got {value!r}"
    elif name == "class_weight":
        if value not in CLASS_WEIGHTS:
            return f"class_weight must be one of {list(CLASS_WEIGHTS)}, got {value!r}"
    elif name == "bootstrap":
        if not isinstance(value, bool):
            return f"bootstrap must be true or false, got {value!r}"
    elif name == "C":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return f"C must be a number > 0, got {value!r}"
        if not np.isfinite(value) or value <= 0:
            return f"C must be > 0, got {value!r}"
    elif name == "penalty":
        if value not in linear.PENALTIES:
            return f"penalty must be one of {list(linear.PENALTIES)}, got {value!r}"
    elif name == "kernel":
        if value not in svm.KERNELS:
            return f"kernel must be one of {list(svm.KERNELS)}, got {value!r}"
    else:
        return f"unknown hyperparameter {name!r} for family {family!r}"
    return None


class HyperparamAssignment:
    """One point of a family's hyperparameter space.

    Validates on construction that the value map covers exactly the
    family's hyperparameter names and that every value is admissible.
    Immutable once built.
    """

    __slots__ = ("family", "values")

    def __init__(self, family: str, values):
        if family not in FAMILIES:
            raise ModelError(f"unknown model family: {family!r}")
        expected = HYPERPARAM_ORDER[family]
        got = set(values)
        missing = set(expected) - got
        extra = got - set(expected)
        if missing or extra:
            raise ModelError(
                f"{family} assignment must set exactly {list(expected)}; "
                f"missing {sorted(missing)}, unexpected {sorted(extra)}"
            )
        for name in expected:
            problem = _check_value(family, name, values[name])
            if problem:
                raise ModelError(problem)
        ordered = {name: values[name] for name in expected}
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "values", MappingProxyType(ordered))

    def __setattr__(self, name, value):
        raise AttributeError("HyperparamAssignment is immutable")

    def __getitem__(self, name: str):
        return self.values[name]

    def to_json_dict(self) -> dict:
        return dict(self.values)

    def __repr__(self):
        return f"HyperparamAssignment({self.family!r}, {dict(self.values)!r})"

    def __hash__(self):
        return hash((self.family, tuple(self.values.items())))

    def __eq__(self, other):
        return (
            isinstance(other, HyperparamAssignment)
            and self.family == other.family
            and dict(self.values) == dict(other.values)
        )


@dataclass(frozen=True)
class TrainedModel:
    family: str
    assignment: HyperparamAssignment
    params: object
    seed: int
    n_features: int


def _validate_training_inputs(X: np.ndarray, y: np.ndarray):
    if X.ndim != 2:
        raise TrainingError("feature matrix must be two-dimensional")
    if len(X) != len(y):
        raise TrainingError("feature matrix and labels disagree on row count")
    if len(y) < 2:
        raise TrainingError("need at least 2 training rows")
    if not np.all(np.isfinite(X)):
        raise TrainingError("training features contain non-finite values")
    present = np.unique(y)
    if len(present) < 2:
        raise TrainingError(
            f"training partition contains a single class ({int(present[0])})"
        )


def _sample_weights(y: np.ndarray, class_weight: str) -> np.ndarray:
    if class_weight == "balanced":
        return tree.balanced_weights(y)
    return np.ones(len(y), dtype=np.float64)


def train(
    X: np.ndarray,
    y: np.ndarray,
    assignment: HyperparamAssignment,
    seed: int,
    n_forest_trees: int = DEFAULT_FOREST_TREES,
) -> TrainedModel:
    """Fit one model on a training partition (features X, labels y)."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int8)
    _validate_training_inputs(X, y)
    a = assignment
    if a.family == "decision_tree":
        params = tree.grow_tree(
            X,
            y,
            _sample_weights(y, a["class_weight"]),
            criterion=a["criterion"],
            max_features=a["max_features"],
            min_samples_split=a["min_samples_split"],
            min_samples_leaf=a["min_samples_leaf"],
            rng=np.random.default_rng(seed),
        )
    elif a.family == "random_forest":
        params = forest.grow_forest(
            X,
            y,
            _sample_weights(y, a["class_weight"]),
            criterion=a["criterion"],
            max_features=a["max_features"],
            min_samples_split=a["min_samples_split"],
            min_samples_leaf=a["min_samples_leaf"],
            bootstrap=a["bootstrap"],
            n_trees=n_forest_trees,
            seed=seed,
        )
    elif a.family == "logistic_regression":
        params = linear.fit_logistic(X, y, c=float(a["C"]), penalty=a["penalty"])
    elif a.family == "svc":
        params = svm.fit_svc(X, y, c=float(a["C"]), kernel=a["kernel"], seed=seed)
    else:  # pragma: no cover - assignment construction rejects this
        raise ModelError(f"unknown family {a.family!r}")
    return TrainedModel(
        family=a.family,
        assignment=a,
        params=params,
        seed=seed,
        n_features=X.shape[1],
    )


def predict(m: TrainedModel, X: np.ndarray) -> np.ndarray:
    """Predict 0/1 labels; pure function of (model, rows)."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != m.n_features:
        raise ModelError(
            f"feature arity mismatch: model expects {m.n_features}, "
            f"got {X.shape[1] if X.ndim == 2 else 'non-matrix input'}"
        )
    if m.family == "decision_tree":
        return tree.predict_tree(m.params, X)
    if m.family == "random_forest":
        return forest.predict_forest(m.params, X)
    if m.family == "logistic_regression":
        return linear.predict_logistic(m.params, X)
    if m.family == "svc":
        return svm.predict_svc(m.params, X)
    raise ModelError(f"unknown family {m.family!r}")  # pragma: no cover
