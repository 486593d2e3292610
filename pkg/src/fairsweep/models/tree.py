"""Greedy CART decision tree for binary classification.

Splits are binary thresholds on numeric features, chosen to maximize the
weighted impurity decrease (gini or entropy). Thresholds are midpoints
between consecutive distinct sorted values. Ties resolve to the lowest
feature index, then the lowest threshold, so training is deterministic
for a fixed seed. There is no depth bound; growth stops at pure nodes,
nodes below min_samples_split, or when no candidate split leaves both
children with at least min_samples_leaf samples.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

CRITERIA = ("gini", "entropy")
MAX_FEATURES = ("none", "sqrt", "log2")


@dataclass(frozen=True)
class TreeParams:
    """Flattened tree: feature[i] < 0 marks node i as a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    label: np.ndarray
    n_node_samples: np.ndarray
    n_features: int

    @property
    def n_nodes(self) -> int:
        return len(self.feature)


def n_candidate_features(p: int, max_features: str) -> int:
    if max_features == "none":
        return p
    if max_features == "sqrt":
        return max(1, int(math.sqrt(p)))
    if max_features == "log2":
        return max(1, int(math.log2(p))) if p > 1 else 1
    raise ValueError(f"unknown max_features: {max_features!r}")


def balanced_weights(y: np.ndarray) -> np.ndarray:
    """Per-sample weights n / (n_classes * n_class), n_classes = 2."""
    n = len(y)
    w = np.empty(n, dtype=np.float64)
    for c in (0, 1):
        mask = y == c
        count = int(np.sum(mask))
        w[mask] = n / (2.0 * count) if count else 0.0
    return w


def _weighted_majority(y: np.ndarray, w: np.ndarray) -> int:
    w1 = float(np.sum(w[y == 1]))
    w0 = float(np.sum(w[y == 0]))
    return 1 if w1 > w0 else 0


def _impurity(w0: float, w1: float, criterion: str) -> float:
    total = w0 + w1
    if total <= 0.0:
        return 0.0
    p0 = w0 / total
    p1 = w1 / total
    if criterion == "gini":
        return 1.0 - p0 * p0 - p1 * p1
    ent = 0.0
    for p in (p0, p1):
        if p > 0.0:
            ent -= p * math.log2(p)
    return ent


def _xlog2x(a: np.ndarray) -> np.ndarray:
    # a * log2(a) with 0 log 0 = 0
    out = np.zeros_like(a)
    pos = a > 0.0
    out[pos] = a[pos] * np.log2(a[pos])
    return out


def _best_split(xs, y, w, min_leaf, criterion):
    """Best threshold over the feature block xs (n rows, k columns).

    Returns (column, threshold, decrease) or None when no position keeps
    both children at or above min_leaf. Candidate positions lie between
    consecutive distinct sorted values; the scan evaluates every position
    of every column in one vectorized pass.
    """
    n, k = xs.shape
    if n < 2 * min_leaf or n < 2:
        return None
    order = np.argsort(xs, axis=0, kind="stable")
    v = np.take_along_axis(xs, order, axis=0)
    w1 = w * (y == 1)
    w0 = w - w1
    c1 = np.cumsum(w1[order], axis=0)[:-1]
    c0 = np.cumsum(w0[order], axis=0)[:-1]
    t1 = float(np.sum(w1))
    t0 = float(np.sum(w0))
    total = t0 + t1
    r1 = t1 - c1
    r0 = t0 - c0
    wl = c0 + c1
    wr = r0 + r1

    positions = np.arange(1, n)
    sizes_ok = (positions >= min_leaf) & (n - positions >= min_leaf)
    valid = (v[1:] > v[:-1]) & sizes_ok[:, None]
    if not valid.any():
        return None

    with np.errstate(divide="ignore", invalid="ignore"):
        if criterion == "gini":
            child = (wl - (c0 * c0 + c1 * c1) / wl) + (wr - (r0 * r0 + r1 * r1) / wr)
        else:
            child = -(
                _xlog2x(c0) + _xlog2x(c1) - _xlog2x(wl)
                + _xlog2x(r0) + _xlog2x(r1) - _xlog2x(wr)
            )
    parent = _impurity(t0, t1, criterion) * total
    decrease = (parent - child) / total
    decrease[~valid] = -np.inf

    per_col = decrease.max(axis=0)
    col = int(np.argmax(per_col))
    best = float(per_col[col])
    if not np.isfinite(best):
        return None
    pos = int(np.argmax(decrease[:, col]))
    threshold = (float(v[pos, col]) + float(v[pos + 1, col])) / 2.0
    return col, threshold, best


def grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    sample_weight: np.ndarray,
    criterion: str,
    max_features: str,
    min_samples_split: int,
    min_samples_leaf: int,
    rng: np.random.Generator,
) -> TreeParams:
    """Grow a CART tree depth-first (left child before right).

    The generator is consumed only for per-node feature subsampling, in
    expansion order, so a fixed seed reproduces the tree exactly.
    """
    n, p = X.shape
    k = n_candidate_features(p, max_features)
    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    label: list[int] = []
    n_samples: list[int] = []

    def new_node() -> int:
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        label.append(0)
        n_samples.append(0)
        return len(feature) - 1

    root = new_node()
    stack = [(np.arange(n), root)]
    while stack:
        rows, nid = stack.pop()
        yn = y[rows]
        wn = sample_weight[rows]
        n_samples[nid] = len(rows)
        pure = bool(np.all(yn == yn[0]))
        if pure or len(rows) < min_samples_split:
            label[nid] = _weighted_majority(yn, wn)
            continue
        if k < p:
            feats = np.sort(rng.choice(p, size=k, replace=False))
        else:
            feats = np.arange(p)
        found = _best_split(
            X[np.ix_(rows, feats)], yn, wn, min_samples_leaf, criterion
        )
        if found is None:
            label[nid] = _weighted_majority(yn, wn)
            continue
        col, thr, _ = found
        f = int(feats[col])
        go_left = X[rows, f] <= thr
        feature[nid] = f
        threshold[nid] = thr
        lid = new_node()
        rid = new_node()
        left[nid] = lid
        right[nid] = rid
        stack.append((rows[~go_left], rid))
        stack.append((rows[go_left], lid))

    return TreeParams(
        feature=np.asarray(feature, dtype=np.int64),
        threshold=np.asarray(threshold, dtype=np.float64),
        left=np.asarray(left, dtype=np.int64),
        right=np.asarray(right, dtype=np.int64),
        label=np.asarray(label, dtype=np.int64),
        n_node_samples=np.asarray(n_samples, dtype=np.int64),
        n_features=p,
    )


def predict_tree(t: TreeParams, X: np.ndarray) -> np.ndarray:
    """Route every row to a leaf and return leaf labels."""
    n = len(X)
    node = np.zeros(n, dtype=np.int64)
    if n == 0:
        return np.empty(0, dtype=np.int8)
    active = t.feature[node] >= 0
    while active.any():
        rows = np.nonzero(active)[0]
        ids = node[rows]
        go_left = X[rows, t.feature[ids]] <= t.threshold[ids]
        node[rows] = np.where(go_left, t.left[ids], t.right[ids])
        active[rows] = t.feature[node[rows]] >= 0
    return t.label[node].astype(np.int8)


def walk_structure(t: TreeParams):
    """Yield (node_id, is_leaf, n_samples, children_sum) for invariants.

    children_sum is None for leaves; for internal nodes it is the sample
    count of the two children, which must equal the node's own count.
    """
    for i in range(t.n_nodes):
        if t.feature[i] < 0:
            yield i, True, int(t.n_node_samples[i]), None
        else:
            s = int(t.n_node_samples[t.left[i]]) + int(t.n_node_samples[t.right[i]])
            yield i, False, int(t.n_node_samples[i]), s
