"""Fairness-aware hyperparameter exploration.

Trains classifier families over full-factorial hyperparameter grids,
scores each configuration on accuracy and group-fairness metrics across
repeated splits, and extracts Pareto frontiers of the non-dominated
configurations.
"""
from .data import (
    DataError,
    Dataset,
    PreprocessConfig,
    SplitPlan,
    encode_task,
    load_csv,
    make_splits,
    preprocess,
)
from .grid import (
    EvaluationRecord,
    GridError,
    HyperparamSpace,
    ProgressSink,
    default_space,
    expand,
    run_grid,
    validate_space,
)
from .metrics import METRIC_IDS, MetricError, MetricVector, evaluate_predictions
from .models import FAMILIES, HyperparamAssignment, ModelError, TrainingError, predict, train
from .pareto import (
    ObjectivePair,
    ParetoError,
    ParetoSet,
    dominates,
    extract_frontier,
)
from .pipeline import (
    ConfigError,
    canonical_config,
    prepare_dataset,
    run_exploration,
)
from .report import ParetoTable, build_table, generate_report

__version__ = "0.1.0"

__all__ = [
    "METRIC_IDS",
    "FAMILIES",
    "ConfigError",
    "DataError",
    "Dataset",
    "EvaluationRecord",
    "GridError",
    "HyperparamAssignment",
    "HyperparamSpace",
    "MetricError",
    "MetricVector",
    "ModelError",
    "ObjectivePair",
    "ParetoError",
    "ParetoSet",
    "ParetoTable",
    "PreprocessConfig",
    "ProgressSink",
    "SplitPlan",
    "TrainingError",
    "build_table",
    "canonical_config",
    "default_space",
    "dominates",
    "encode_task",
    "evaluate_predictions",
    "expand",
    "extract_frontier",
    "generate_report",
    "load_csv",
    "make_splits",
    "predict",
    "prepare_dataset",
    "preprocess",
    "run_exploration",
    "run_grid",
    "train",
    "validate_space",
]
