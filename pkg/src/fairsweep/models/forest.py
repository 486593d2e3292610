"""Random forest: majority vote over seeded CART trees.

Tree i trains with seed (forest seed + i), so a one-tree forest without
bootstrap is constructed identically to a lone tree trained with the
forest's seed. With bootstrap on, each tree draws its own resample of
the training rows; otherwise every tree sees the full training set.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tree import TreeParams, grow_tree, predict_tree


@dataclass(frozen=True)
class ForestParams:
    trees: tuple[TreeParams, ...]
    n_features: int


def grow_forest(
    X: np.ndarray,
    y: np.ndarray,
    sample_weight: np.ndarray,
    criterion: str,
    max_features: str,
    min_samples_split: int,
    min_samples_leaf: int,
    bootstrap: bool,
    n_trees: int,
    seed: int,
) -> ForestParams:
    n = len(y)
    trees = []
    for i in range(n_trees):
        rng = np.random.default_rng(seed + i)
        if bootstrap:
            rows = rng.integers(0, n, size=n)
            xi, yi, wi = X[rows], y[rows], sample_weight[rows]
        else:
            xi, yi, wi = X, y, sample_weight
        trees.append(
            grow_tree(
                xi,
                yi,
                wi,
                criterion=criterion,
                max_features=max_features,
                min_samples_split=min_samples_split,
                min_samples_leaf=min_samples_leaf,
                rng=rng,
            )
        )
    return ForestParams(trees=tuple(trees), n_features=X.shape[1])


def predict_forest(f: ForestParams, X: np.ndarray) -> np.ndarray:
    votes = np.zeros(len(X), dtype=np.int64)
    for t in f.trees:
        votes += predict_tree(t, X)
    # strict majority for label 1; ties go to 0
    return (votes * 2 > len(f.trees)).astype(np.int8)
