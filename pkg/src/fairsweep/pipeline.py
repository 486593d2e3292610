"""Shared exploration pipeline: config validation, dataset preparation,
and multi-family sweep execution.

The command line and the HTTP service both run through this module, so
a given config and CSV produce byte-identical record JSON no matter the
entry point. canonical_config() fills every default explicitly; its
sorted-key serialization is the config echo used in reports.
"""
from __future__ import annotations

from . import models
from .data import (
    Dataset,
    PreprocessConfig,
    SplitPlan,
    encode_task,
    load_csv,
    make_splits,
    preprocess,
)
from .grid import (
    DEFAULT_EXPANSION_CAP,
    EvaluationRecord,
    HyperparamSpace,
    ProgressSink,
    default_space,
    grid_size,
    run_grid,
    validate_space,
)
from .metrics import METRIC_IDS
from .models import FAMILIES
from .pareto import ACCURACY_OBJECTIVES, MODES
from .report import json_bytes

IMPUTE_CHOICES = ("none", "mean", "median")
STANDARDIZE_CHOICES = ("zscore", "none")


class ConfigError(ValueError):
    """Invalid exploration config; carries the full violation list."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def _expect_list(doc, key, violations, prefix=""):
    v = doc.get(key)
    if v is not None and not isinstance(v, list):
        violations.append(f"{prefix}{key}: expected a list")
        return None
    return v


def validate_data_section(data) -> list[str]:
    """Violations in the data section alone (missing codes, preprocess,
    task encoding); the dataset upload validates exactly this shape."""
    v: list[str] = []
    if not isinstance(data, dict):
        return ["data: required object missing"]
    for key in data:
        if key not in ("missing_codes", "preprocess", "task"):
            v.append(f"data: unknown field {key!r}")
    _expect_list(data, "missing_codes", v, "data.")
    pre = data.get("preprocess", {})
    if not isinstance(pre, dict):
        v.append("data.preprocess: expected an object")
        pre = {}
    for key in pre:
        if key not in ("row_missing_threshold", "impute", "standardize"):
            v.append(f"data.preprocess: unknown field {key!r}")
    thr = pre.get("row_missing_threshold", 0.75)
    if not isinstance(thr, (int, float)) or isinstance(thr, bool) or not 0 <= thr <= 1:
        v.append("data.preprocess.row_missing_threshold: must be a number in [0, 1]")
    if pre.get("impute", "none") not in IMPUTE_CHOICES:
        v.append(f"data.preprocess.impute: must be one of {IMPUTE_CHOICES}")
    if pre.get("standardize", "zscore") not in STANDARDIZE_CHOICES:
        v.append(f"data.preprocess.standardize: must be one of {STANDARDIZE_CHOICES}")
    task = data.get("task")
    if not isinstance(task, dict):
        v.append("data.task: required object missing")
        task = {}
    for key in task:
        if key not in (
            "target", "positive_values", "negative_values",
            "sensitive", "group0_values", "group1_values",
        ):
            v.append(f"data.task: unknown field {key!r}")
    for key in ("target", "sensitive"):
        if not isinstance(task.get(key), str) or not task.get(key):
            v.append(f"data.task.{key}: required column name missing")
    for key in ("positive_values", "group0_values"):
        vals = _expect_list(task, key, v, "data.task.")
        if vals is not None and len(vals) == 0:
            v.append(f"data.task.{key}: must not be empty")
        if task.get(key) is None:
            v.append(f"data.task.{key}: required list missing")
    _expect_list(task, "negative_values", v, "data.task.")
    _expect_list(task, "group1_values", v, "data.task.")
    return v


def validate_config(doc) -> list[str]:
    """All violations in one pass; empty means the config is usable."""
    v: list[str] = []
    if not isinstance(doc, dict):
        return ["config: expected a JSON object"]
    known = {
        "data", "families", "spaces", "metrics", "split", "seed",
        "mode", "workers", "random_forest_trees", "accuracy_objective",
    }
    for key in doc:
        if key not in known:
            v.append(f"unknown field: {key}")

    v.extend(validate_data_section(doc.get("data")))

    families = doc.get("families", list(FAMILIES))
    if not isinstance(families, list) or not families:
        v.append("families: must be a non-empty list")
        families = []
    seen = set()
    for f in families:
        if f not in FAMILIES:
            v.append(f"families: unknown model family {f!r}")
        elif f in seen:
            v.append(f"families: duplicate family {f!r}")
        seen.add(f)

    spaces = doc.get("spaces", {})
    if not isinstance(spaces, dict):
        v.append("spaces: expected an object keyed by family")
        spaces = {}
    for family, mapping in spaces.items():
        if family not in FAMILIES:
            v.append(f"spaces: unknown model family {family!r}")
            continue
        if not isinstance(mapping, dict):
            v.append(f"spaces.{family}: expected an object")
            continue
        try:
            v.extend(validate_space(HyperparamSpace.from_dict(family, mapping)))
        except (ValueError, TypeError) as e:
            v.append(f"spaces.{family}: {e}")

    metric_ids = doc.get("metrics", list(METRIC_IDS))
    if not isinstance(metric_ids, list) or not metric_ids:
        v.append("metrics: must be a non-empty list")
        metric_ids = []
    seen = set()
    for m in metric_ids:
        if m not in METRIC_IDS:
            v.append(f"metrics: unknown fairness metric {m!r}")
        elif m in seen:
            v.append(f"metrics: duplicate metric {m!r}")
        seen.add(m)

    split = doc.get("split", {})
    if not isinstance(split, dict):
        v.append("split: expected an object")
        split = {}
    for key in split:
        if key not in ("n_splits", "test_fraction", "stratified"):
            v.append(f"split: unknown field {key!r}")
    n_splits = split.get("n_splits", 10)
    if not isinstance(n_splits, int) or isinstance(n_splits, bool) or n_splits < 1:
        v.append("split.n_splits: must be an integer >= 1")
    frac = split.get("test_fraction", 0.3)
    if not isinstance(frac, (int, float)) or isinstance(frac, bool) or not 0 < frac < 1:
        v.append("split.test_fraction: must be a number in (0, 1)")
    if not isinstance(split.get("stratified", True), bool):
        v.append("split.stratified: must be a boolean")

    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        v.append("seed: must be an integer")
    if doc.get("mode", "weak") not in MODES:
        v.append(f"mode: must be one of {MODES}")
    workers = doc.get("workers", 1)
    if not isinstance(workers, int) or isinstance(workers, bool) or workers < 1:
        v.append("workers: must be an integer >= 1")
    trees = doc.get("random_forest_trees", models.DEFAULT_FOREST_TREES)
    if not isinstance(trees, int) or isinstance(trees, bool) or trees < 1:
        v.append("random_forest_trees: must be an integer >= 1")
    if doc.get("accuracy_objective", "accuracy") not in ACCURACY_OBJECTIVES:
        v.append(f"accuracy_objective: must be one of {ACCURACY_OBJECTIVES}")
    return v


def canonical_config(doc) -> dict:
    """Validate and normalize: every default made explicit, every space
    expanded to its full value lists."""
    violations = validate_config(doc)
    if violations:
        raise ConfigError(violations)
    data = doc["data"]
    pre = data.get("preprocess", {})
    task = data["task"]
    families = list(doc.get("families", list(FAMILIES)))
    spaces_in = doc.get("spaces", {})
    spaces = {}
    for family in families:
        if family in spaces_in:
            space = HyperparamSpace.from_dict(family, spaces_in[family])
        else:
            space = default_space(family)
        spaces[family] = space.to_json_dict()
    return {
        "data": {
            "missing_codes": [str(c) for c in data.get("missing_codes", [])],
            "preprocess": {
                "row_missing_threshold": float(pre.get("row_missing_threshold", 0.75)),
                "impute": pre.get("impute", "none"),
                "standardize": pre.get("standardize", "zscore"),
            },
            "task": {
                "target": task["target"],
                "positive_values": list(task["positive_values"]),
                "negative_values": (
                    list(task["negative_values"])
                    if task.get("negative_values") is not None
                    else None
                ),
                "sensitive": task["sensitive"],
                "group0_values": list(task["group0_values"]),
                "group1_values": (
                    list(task["group1_values"])
                    if task.get("group1_values") is not None
                    else None
                ),
            },
        },
        "families": families,
        "spaces": spaces,
        "metrics": list(doc.get("metrics", list(METRIC_IDS))),
        "split": {
            "n_splits": doc.get("split", {}).get("n_splits", 10),
            "test_fraction": float(doc.get("split", {}).get("test_fraction", 0.3)),
            "stratified": doc.get("split", {}).get("stratified", True),
        },
        "seed": doc.get("seed", 0),
        "mode": doc.get("mode", "weak"),
        "workers": doc.get("workers", 1),
        "random_forest_trees": doc.get("random_forest_trees", models.DEFAULT_FOREST_TREES),
        "accuracy_objective": doc.get("accuracy_objective", "accuracy"),
    }


def config_json_bytes(canonical: dict) -> bytes:
    return json_bytes(canonical)


def prepare_dataset(csv_source, canonical: dict) -> Dataset:
    """CSV bytes/path to an encoded, model-ready dataset."""
    data_cfg = canonical["data"]
    task = data_cfg["task"]
    raw = load_csv(csv_source, missing_codes=tuple(data_cfg["missing_codes"]))
    pre = data_cfg["preprocess"]
    cleaned = preprocess(
        raw,
        PreprocessConfig(
            missing_codes=tuple(data_cfg["missing_codes"]),
            row_missing_threshold=pre["row_missing_threshold"],
            impute=pre["impute"],
            standardize=pre["standardize"],
        ),
        exclude=(task["target"], task["sensitive"]),
    )
    return encode_task(
        cleaned,
        target_col=task["target"],
        positive_values=tuple(task["positive_values"]),
        sensitive_col=task["sensitive"],
        group0_values=tuple(task["group0_values"]),
        negative_values=(
            tuple(task["negative_values"]) if task["negative_values"] is not None else None
        ),
        group1_values=(
            tuple(task["group1_values"]) if task["group1_values"] is not None else None
        ),
    )


def family_spaces(canonical: dict) -> dict[str, HyperparamSpace]:
    return {
        family: HyperparamSpace.from_dict(family, canonical["spaces"][family])
        for family in canonical["families"]
    }


def exploration_task_total(canonical: dict) -> int:
    """Number of (assignment, split) training tasks in the whole run."""
    n_splits = canonical["split"]["n_splits"]
    return sum(grid_size(s) for s in family_spaces(canonical).values()) * n_splits


def run_exploration(
    d: Dataset,
    canonical: dict,
    progress: ProgressSink | None = None,
    on_model=None,
    cap: int = DEFAULT_EXPANSION_CAP,
) -> list[EvaluationRecord]:
    """All families of the config over one shared split list; records
    concatenated in config family order, each family in expand order."""
    plan = SplitPlan(
        n_splits=canonical["split"]["n_splits"],
        test_fraction=canonical["split"]["test_fraction"],
        stratified=canonical["split"]["stratified"],
        seed=canonical["seed"],
    )
    splits = make_splits(d, plan)
    records: list[EvaluationRecord] = []
    for family, space in family_spaces(canonical).items():
        if grid_size(space) > cap:
            raise ConfigError(
                [f"spaces.{family}: grid of {grid_size(space)} assignments exceeds the cap of {cap}"]
            )
        records.extend(
            run_grid(
                d,
                space,
                plan,
                metric_ids=tuple(canonical["metrics"]),
                seed=canonical["seed"],
                progress=progress,
                workers=canonical["workers"],
                n_forest_trees=canonical["random_forest_trees"],
                on_model=on_model,
                splits=splits,
            )
        )
    return records


def records_json_bytes(records) -> bytes:
    return json_bytes({"records": [r.to_json_dict() for r in records]})
