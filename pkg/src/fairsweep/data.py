"""Dataset ingestion: CSV loading, preprocessing, task encoding, splits.

A Dataset is an immutable table of named columns plus, once a task has
been encoded onto it, a binary target vector and a binary sensitive-group
vector. The pipeline is load_csv -> preprocess -> encode_task ->
make_splits; every step is pure and fully determined by its inputs, so
identical source bytes, config, and seed reproduce identical datasets
and splits.
"""
from __future__ import annotations

import csv
import hashlib
import io
import math
import os
from dataclasses import dataclass, field, replace

import numpy as np

NUMERIC = "numeric"
CATEGORICAL = "categorical"

IMPUTE_STRATEGIES = ("none", "mean", "median")
STANDARDIZE_STRATEGIES = ("none", "zscore")


class DataError(ValueError):
    """Invalid dataset content or configuration."""


@dataclass(frozen=True)
class Column:
    """One named column; numeric values are floats (NaN = missing),
    categorical values are strings (None = missing)."""

    name: str
    kind: str
    values: tuple

    @property
    def n_missing(self) -> int:
        if self.kind == NUMERIC:
            return sum(1 for v in self.values if math.isnan(v))
        return sum(1 for v in self.values if v is None)


@dataclass(frozen=True)
class Dataset:
    columns: tuple[Column, ...]
    n_rows: int
    target: np.ndarray | None = None
    sensitive: np.ndarray | None = None
    provenance: tuple[str, ...] = ()

    def __post_init__(self):
        for col in self.columns:
            if len(col.values) != self.n_rows:
                raise DataError(
                    f"column {col.name!r} has {len(col.values)} entries, "
                    f"expected {self.n_rows}"
                )
        for name, vec in (("target", self.target), ("sensitive", self.sensitive)):
            if vec is not None:
                if len(vec) != self.n_rows:
                    raise DataError(f"{name} length does not match n_rows")
                if not np.all(np.isin(vec, (0, 1))):
                    raise DataError(f"{name} contains values outside {{0, 1}}")

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def column(self, name: str) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise DataError(f"no column named {name!r}")

    @property
    def encoded(self) -> bool:
        return self.target is not None and self.sensitive is not None

    def feature_matrix(self) -> tuple[np.ndarray, tuple[str, ...]]:
        """Design matrix of all feature columns, which must be numeric.

        Returns (X, names) with X of shape (n_rows, n_features). Only
        valid after encode_task, which one-hot encodes categoricals.
        """
        if not self.encoded:
            raise DataError("feature_matrix requires an encoded dataset")
        arrays = []
        for c in self.columns:
            if c.kind != NUMERIC:
                raise DataError(f"feature column {c.name!r} is not numeric")
            arrays.append(np.asarray(c.values, dtype=np.float64))
        if arrays:
            x = np.column_stack(arrays)
        else:
            x = np.empty((self.n_rows, 0), dtype=np.float64)
        x.setflags(write=False)
        return x, self.column_names

    def to_json_dict(self) -> dict:
        cols = [
            {"name": c.name, "kind": c.kind, "values": list(c.values)}
            for c in self.columns
        ]
        return {
            "n_rows": self.n_rows,
            "columns": cols,
            "target": None if self.target is None else self.target.tolist(),
            "sensitive": None if self.sensitive is None else self.sensitive.tolist(),
            "provenance": list(self.provenance),
        }

    @staticmethod
    def from_json_dict(doc: dict) -> "Dataset":
        cols = []
        for c in doc["columns"]:
            values = c["values"]
            if c["kind"] == NUMERIC:
                values = tuple(float(v) for v in values)
            else:
                values = tuple(values)
            cols.append(Column(name=c["name"], kind=c["kind"], values=values))
        target = doc.get("target")
        sensitive = doc.get("sensitive")
        return Dataset(
            columns=tuple(cols),
            n_rows=doc["n_rows"],
            target=None if target is None else _freeze(np.asarray(target, dtype=np.int8)),
            sensitive=None
            if sensitive is None
            else _freeze(np.asarray(sensitive, dtype=np.int8)),
            provenance=tuple(doc.get("provenance", ())),
        )


@dataclass(frozen=True)
class PreprocessConfig:
    missing_codes: tuple[str, ...] = ()
    row_missing_threshold: float = 0.75
    impute: str = "none"
    standardize: str = "zscore"

    def __post_init__(self):
        if not 0.0 <= self.row_missing_threshold <= 1.0:
            raise DataError("row_missing_threshold must be in [0, 1]")
        if self.impute not in IMPUTE_STRATEGIES:
            raise DataError(f"impute must be one of {IMPUTE_STRATEGIES}")
        if self.standardize not in STANDARDIZE_STRATEGIES:
            raise DataError(f"standardize must be one of {STANDARDIZE_STRATEGIES}")


@dataclass(frozen=True)
class SplitPlan:
    n_splits: int = 10
    test_fraction: float = 0.3
    stratified: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.n_splits < 1:
            raise DataError("n_splits must be >= 1")
        if not 0.0 < self.test_fraction < 1.0:
            raise DataError("test_fraction must be in (0, 1)")


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def load_csv(source, missing_codes=()) -> Dataset:
    """Parse a CSV byte stream (or bytes, or str path) into a raw Dataset.

    The first row is the header. A cell is missing when it is empty or
    equals one of the missing codes. A column is numeric when every
    non-missing cell parses as a number, categorical otherwise.
    """
    raw = _read_bytes(source)
    text = raw.decode("utf-8-sig")
    reader = csv.reader(io.StringIO(text, newline=""))
    rows = [row for row in reader]
    # csv module yields [] for blank lines; drop fully blank trailing lines
    while rows and rows[-1] == []:
        rows.pop()
    if not rows:
        raise DataError("empty file: no header row")
    header = rows[0]
    if len(set(header)) != len(header):
        raise DataError("duplicate column names in header")
    body = rows[1:]
    for i, row in enumerate(body):
        if len(row) != len(header):
            raise DataError(
                f"ragged row at line {i + 2}: expected {len(header)} cells, "
                f"got {len(row)}"
            )
    codes = set(missing_codes)
    n_rows = len(body)
    columns = []
    for j, name in enumerate(header):
        cells = [row[j] for row in body]
        raw_vals: list[str | None] = [
            None if (c == "" or c in codes) else c for c in cells
        ]
        numeric = True
        for v in raw_vals:
            if v is None:
                continue
            try:
                float(v)
            except ValueError:
                numeric = False
                break
        if numeric:
            values = tuple(
                float("nan") if v is None else float(v) for v in raw_vals
            )
            columns.append(Column(name=name, kind=NUMERIC, values=values))
        else:
            columns.append(Column(name=name, kind=CATEGORICAL, values=tuple(raw_vals)))
    digest = hashlib.sha256(raw).hexdigest()[:12]
    return Dataset(
        columns=tuple(columns),
        n_rows=n_rows,
        provenance=(f"load_csv[sha256={digest}]",),
    )


def _read_bytes(source) -> bytes:
    if isinstance(source, bytes):
        return source
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as f:
            return f.read()
    return source.read()


def _is_missing(col: Column, i: int) -> bool:
    v = col.values[i]
    return math.isnan(v) if col.kind == NUMERIC else v is None


def preprocess(raw: Dataset, cfg: PreprocessConfig, exclude=()) -> Dataset:
    """Drop heavily missing rows, impute, and standardize.

    Rows whose missing fraction exceeds the threshold are dropped first.
    Then numeric columns are imputed per strategy; with impute="none",
    and for any cell imputation cannot fill (categorical or excluded
    columns), rows that still contain missing values are dropped, so the
    result never contains missing cells. Columns named in ``exclude``
    (typically the raw target and sensitive columns) are left untouched
    by imputation and standardization.
    """
    excluded = set(exclude)
    n_cols = len(raw.columns)
    if n_cols == 0:
        raise DataError("dataset has no columns")
    keep = []
    for i in range(raw.n_rows):
        n_missing = sum(1 for c in raw.columns if _is_missing(c, i))
        if n_missing / n_cols <= cfg.row_missing_threshold:
            keep.append(i)
    columns = [
        Column(name=c.name, kind=c.kind, values=tuple(c.values[i] for i in keep))
        for c in raw.columns
    ]
    n_rows = len(keep)

    if cfg.impute in ("mean", "median"):
        imputed = []
        for c in columns:
            if c.kind == NUMERIC and c.name not in excluded:
                vals = np.asarray(c.values, dtype=np.float64)
                observed = vals[~np.isnan(vals)]
                if observed.size:
                    fill = (
                        float(np.mean(observed))
                        if cfg.impute == "mean"
                        else float(np.median(observed))
                    )
                    vals = np.where(np.isnan(vals), fill, vals)
                imputed.append(replace(c, values=tuple(float(v) for v in vals)))
            else:
                imputed.append(c)
        columns = imputed

    # drop any row still holding a missing cell
    complete = [
        i
        for i in range(n_rows)
        if not any(_is_missing(c, i) for c in columns)
    ]
    columns = [
        Column(name=c.name, kind=c.kind, values=tuple(c.values[i] for i in complete))
        for c in columns
    ]
    n_rows = len(complete)
    if n_rows == 0:
        raise DataError("preprocessing dropped all rows")

    if cfg.standardize == "zscore":
        standardized = []
        for c in columns:
            if c.kind == NUMERIC and c.name not in excluded:
                vals = np.asarray(c.values, dtype=np.float64)
                mean = float(np.mean(vals))
                std = float(np.std(vals, ddof=1)) if n_rows > 1 else 0.0
                if std == 0.0:
                    z = np.zeros_like(vals)
                else:
                    z = (vals - mean) / std
                standardized.append(replace(c, values=tuple(float(v) for v in z)))
            else:
                standardized.append(c)
        columns = standardized

    step = (
        f"preprocess[threshold={cfg.row_missing_threshold},impute={cfg.impute},"
        f"standardize={cfg.standardize}]"
    )
    return Dataset(
        columns=tuple(columns),
        n_rows=n_rows,
        provenance=raw.provenance + (step,),
    )


def _value_in(col: Column, i: int, declared: set) -> bool:
    return col.values[i] in declared


def _parse_declared(col: Column, values, what: str) -> set:
    if col.kind == NUMERIC:
        out = set()
        for v in values:
            try:
                out.add(float(v))
            except (TypeError, ValueError):
                raise DataError(
                    f"{what} value {v!r} does not parse as a number for "
                    f"numeric column {col.name!r}"
                )
        return out
    return {str(v) for v in values}


def encode_task(
    d: Dataset,
    target_col: str,
    positive_values,
    sensitive_col: str,
    group0_values,
    negative_values=None,
    group1_values=None,
) -> Dataset:
    """Encode the binary task: 0/1 target, 0/1 sensitive group, one-hot
    features.

    target = 1 iff the raw value is in positive_values; sensitive = 0 iff
    the raw value is in group0_values. When the complementary set
    (negative_values / group1_values) is also given, the two sets must
    partition the observed values; anything in neither set is an error.
    The target and sensitive columns leave the feature set, and remaining
    categorical features become one indicator column per level.
    """
    tcol = d.column(target_col)
    scol = d.column(sensitive_col)
    pos = _parse_declared(tcol, positive_values, "positive")
    g0 = _parse_declared(scol, group0_values, "group0")
    neg = None if negative_values is None else _parse_declared(tcol, negative_values, "negative")
    g1 = None if group1_values is None else _parse_declared(scol, group1_values, "group1")

    for col, a, b, what in ((tcol, pos, neg, "target"), (scol, g0, g1, "sensitive")):
        if b is None:
            continue
        stray = []
        for i in range(d.n_rows):
            if _is_missing(col, i):
                continue
            if not _value_in(col, i, a) and not _value_in(col, i, b):
                v = col.values[i]
                if v not in stray:
                    stray.append(v)
        if stray:
            raise DataError(
                f"{what} column {col.name!r} has values outside the declared "
                f"sets: {sorted(stray, key=str)}"
            )

    target = np.array(
        [1 if _value_in(tcol, i, pos) else 0 for i in range(d.n_rows)],
        dtype=np.int8,
    )
    sensitive = np.array(
        [0 if _value_in(scol, i, g0) else 1 for i in range(d.n_rows)],
        dtype=np.int8,
    )
    declared = {
        ("target class", 1): list(positive_values),
        ("target class", 0): None if negative_values is None else list(negative_values),
        ("sensitive group", 0): list(group0_values),
        ("sensitive group", 1): None if group1_values is None else list(group1_values),
    }
    for name, vec in (("target class", target), ("sensitive group", sensitive)):
        for v in (0, 1):
            if not np.any(vec == v):
                decl = declared[(name, v)]
                detail = "" if decl is None else f" (no rows match {decl!r})"
                raise DataError(f"{name} {v} is empty after encoding{detail}")

    features = []
    for c in d.columns:
        if c.name in (target_col, sensitive_col):
            continue
        if c.kind == NUMERIC:
            features.append(c)
        else:
            levels = sorted({v for v in c.values if v is not None})
            for level in levels:
                indicator = tuple(
                    1.0 if v == level else 0.0 for v in c.values
                )
                features.append(
                    Column(name=f"{c.name}={level}", kind=NUMERIC, values=indicator)
                )
    step = f"encode_task[target={target_col},sensitive={sensitive_col}]"
    return Dataset(
        columns=tuple(features),
        n_rows=d.n_rows,
        target=_freeze(target),
        sensitive=_freeze(sensitive),
        provenance=d.provenance + (step,),
    )


def make_splits(d: Dataset, plan: SplitPlan) -> list[tuple[np.ndarray, np.ndarray]]:
    """Seeded repeated holdout splits as (train_indices, test_indices).

    Stratified splits preserve target class proportions within one row.
    Each split is drawn from an independent generator derived from
    (seed, split index), so the list is fully determined by the plan.
    """
    if not d.encoded:
        raise DataError("make_splits requires an encoded dataset")
    n = d.n_rows
    if n < 4:
        raise DataError("need at least 4 rows to split")
    n_test = int(round(n * plan.test_fraction))
    n_test = min(max(n_test, 1), n - 1)
    y = d.target
    splits = []
    for k in range(plan.n_splits):
        rng = np.random.default_rng(np.random.SeedSequence([plan.seed, k]))
        if plan.stratified:
            test_idx = _stratified_test(y, n_test, rng)
        else:
            perm = rng.permutation(n)
            test_idx = np.sort(perm[:n_test])
        mask = np.zeros(n, dtype=bool)
        mask[test_idx] = True
        train_idx = np.nonzero(~mask)[0]
        splits.append((_freeze(train_idx), _freeze(np.sort(test_idx))))
    return splits


def _stratified_test(y: np.ndarray, n_test: int, rng) -> np.ndarray:
    classes = [0, 1]
    counts = {c: int(np.sum(y == c)) for c in classes}
    for c in classes:
        if counts[c] < 2:
            raise DataError(
                f"stratified split impossible: class {c} has {counts[c]} rows"
            )
    n = len(y)
    exact = {c: n_test * counts[c] / n for c in classes}
    alloc = {c: int(math.floor(exact[c])) for c in classes}
    remainder = n_test - sum(alloc.values())
    # distribute leftover slots by largest fractional part, class 0 first on ties
    order = sorted(classes, key=lambda c: (-(exact[c] - alloc[c]), c))
    for c in order[:remainder]:
        alloc[c] += 1
    picks = []
    for c in classes:
        take = alloc[c]
        if take >= counts[c]:
            raise DataError(
                f"stratified split impossible: class {c} would not appear "
                f"in the training side"
            )
        idx = np.nonzero(y == c)[0]
        picks.append(rng.permutation(idx)[:take])
    return np.concatenate(picks)
