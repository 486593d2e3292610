"""From-scratch model family tests: trees, forests, logistic
regression, and kernel SVC."""
from __future__ import annotations

import numpy as np
import pytest

from fairsweep import models
from fairsweep.models import HyperparamAssignment, ModelError, TrainingError
from fairsweep.models.forest import predict_forest
from fairsweep.models.linear import fit_logistic
from fairsweep.models.svm import kernel_matrix, scale_gamma
from fairsweep.models.tree import (
    balanced_weights,
    grow_tree,
    n_candidate_features,
    predict_tree,
    walk_structure,
)

from conftest import default_assignment

XOR_X = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)


def _blobs(n_per=40, seed=9):
    rng = np.random.default_rng(seed)
    a = rng.normal([-2, -2], 0.5, (n_per, 2))
    b = rng.normal([2, 2], 0.5, (n_per, 2))
    return np.vstack([a, b]), np.array([0] * n_per + [1] * n_per)


def test_assignment_validates_names_and_values():
    with pytest.raises(ModelError):
        HyperparamAssignment("decision_tree", {"criterion": "gini"})
    with pytest.raises(ModelError):
        default_assignment("decision_tree", criterion="chi2")
    with pytest.raises(ModelError):
        default_assignment("logistic_regression", C=0)
    with pytest.raises(ModelError):
        default_assignment("decision_tree", min_samples_leaf=0)
    with pytest.raises(ModelError):
        HyperparamAssignment("perceptron", {})


def test_assignment_is_immutable_and_ordered():
    a = default_assignment("decision_tree")
    assert list(a.values) == [
        "criterion", "max_features", "min_samples_split",
        "min_samples_leaf", "class_weight",
    ]
    with pytest.raises(AttributeError):
        a.family = "svc"
    assert a == default_assignment("decision_tree")
    assert hash(a) == hash(default_assignment("decision_tree"))


def test_train_input_validation():
    a = default_assignment("decision_tree")
    with pytest.raises(TrainingError):
        models.train(np.zeros((2, 2)), np.array([1, 1]), a, seed=0)
    with pytest.raises(TrainingError):
        models.train(np.array([[np.nan, 0], [1, 2]]), np.array([0, 1]), a, seed=0)
    with pytest.raises(TrainingError):
        models.train(np.zeros(4), np.array([0, 1, 0, 1]), a, seed=0)


def test_predict_checks_feature_arity():
    X, y = _blobs()
    m = models.train(X, y, default_assignment("decision_tree"), seed=0)
    with pytest.raises(ModelError):
        models.predict(m, np.zeros((3, 5)))


def test_tree_learns_and_table():
    y = np.array([0, 0, 0, 1])
    m = models.train(XOR_X, y, default_assignment("decision_tree"), seed=0)
    assert models.predict(m, XOR_X).tolist() == [0, 0, 0, 1]


@pytest.mark.parametrize("criterion", ["gini", "entropy"])
def test_tree_learns_xor_via_zero_gain_split(criterion):
    y = np.array([0, 1, 1, 0])
    a = default_assignment("decision_tree", criterion=criterion)
    m = models.train(XOR_X, y, a, seed=0)
    assert models.predict(m, XOR_X).tolist() == [0, 1, 1, 0]


def test_tree_min_samples_leaf_blocks_split():
    y = np.array([0, 0, 0, 1])
    a = default_assignment("decision_tree", min_samples_leaf=4)
    m = models.train(XOR_X, y, a, seed=0)
    # single majority leaf
    assert models.predict(m, XOR_X).tolist() == [0, 0, 0, 0]
    nodes = list(walk_structure(m.params))
    assert len(nodes) == 1 and nodes[0][1]


def test_tree_min_samples_split_blocks_split():
    y = np.array([0, 0, 0, 1])
    a = default_assignment("decision_tree", min_samples_split=8)
    m = models.train(XOR_X, y, a, seed=0)
    assert len(list(walk_structure(m.params))) == 1


def test_tree_majority_tie_predicts_negative():
    X = np.array([[0.0], [0.0], [0.0], [0.0]])
    y = np.array([0, 1, 0, 1])
    m = models.train(X, y, default_assignment("decision_tree"), seed=0)
    assert models.predict(m, X).tolist() == [0, 0, 0, 0]


def test_tree_split_tie_breaks_lowest_feature():
    # both features separate the classes identically; the split must
    # land on feature 0
    X = np.array([[0, 0], [0, 0], [1, 1], [1, 1]], dtype=float)
    y = np.array([0, 0, 1, 1])
    m = models.train(X, y, default_assignment("decision_tree"), seed=0)
    assert m.params.feature[0] == 0
    assert m.params.threshold[0] == 0.5


def test_tree_threshold_is_midpoint():
    X = np.array([[1.0], [3.0], [10.0], [20.0]])
    y = np.array([0, 0, 1, 1])
    m = models.train(X, y, default_assignment("decision_tree"), seed=0)
    assert m.params.threshold[0] == 6.5


def test_tree_structure_invariants():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(150, 5))
    y = (X[:, 0] + 0.3 * X[:, 1] > 0).astype(int)
    a = default_assignment("decision_tree", min_samples_split=8, min_samples_leaf=4)
    m = models.train(X, y, a, seed=0)
    for _, is_leaf, n_samples, children_sum in walk_structure(m.params):
        if is_leaf:
            assert n_samples >= 4
        else:
            assert n_samples >= 8
            assert children_sum == n_samples


def test_tree_feature_subsampling_counts():
    assert n_candidate_features(9, "none") == 9
    assert n_candidate_features(9, "sqrt") == 3
    assert n_candidate_features(8, "log2") == 3
    assert n_candidate_features(1, "sqrt") == 1


def test_tree_subsampling_deterministic_per_seed():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(120, 8))
    y = (X[:, 2] > 0).astype(int)
    a = default_assignment("decision_tree", max_features="sqrt")
    m1 = models.train(X, y, a, seed=5)
    m2 = models.train(X, y, a, seed=5)
    assert np.array_equal(m1.params.feature, m2.params.feature)
    assert np.array_equal(m1.params.threshold, m2.params.threshold)


def test_balanced_weights_values():
    y = np.array([0, 0, 0, 1])
    w = balanced_weights(y)
    # n/(2*count): 4/(2*3) for class 0, 4/(2*1) for class 1
    assert w[y == 0] == pytest.approx(4 / 6)
    assert w[y == 1] == pytest.approx(2.0)


def test_balanced_flips_minority_leaf():
    # 3:1 imbalance at a node the unweighted tree would call negative
    X = np.array([[0.0], [0.0], [0.0], [0.0], [1.0], [1.0]])
    y = np.array([0, 0, 0, 1, 1, 0])
    a_none = default_assignment("decision_tree", min_samples_leaf=2)
    a_bal = default_assignment(
        "decision_tree", min_samples_leaf=2, class_weight="balanced"
    )
    m_none = models.train(X, y, a_none, seed=0)
    m_bal = models.train(X, y, a_bal, seed=0)
    p_none = models.predict(m_none, np.array([[1.0]]))
    p_bal = models.predict(m_bal, np.array([[1.0]]))
    assert p_none[0] != p_bal[0] or not np.array_equal(
        predict_tree(m_none.params, X), predict_tree(m_bal.params, X)
    )


def test_forest_single_tree_no_bootstrap_equals_tree():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(80, 4))
    y = (X[:, 0] + 0.5 * X[:, 1] > 0).astype(int)
    a_rf = default_assignment("random_forest", bootstrap=False)
    a_dt = default_assignment("decision_tree", max_features="sqrt")
    m_rf = models.train(X, y, a_rf, seed=42, n_forest_trees=1)
    m_dt = models.train(X, y, a_dt, seed=42)
    assert np.array_equal(models.predict(m_rf, X), models.predict(m_dt, X))


def test_forest_majority_vote_tie_is_negative():
    from fairsweep.models.forest import ForestParams

    # two stumps with opposite labels everywhere -> every vote ties
    X = np.array([[0.0], [1.0]])
    t0 = grow_tree(X, np.array([0, 0]), np.ones(2), "gini", "none", 2, 1,
                   np.random.default_rng(0))
    t1 = grow_tree(X, np.array([1, 1]), np.ones(2), "gini", "none", 2, 1,
                   np.random.default_rng(0))
    forest = ForestParams(trees=(t0, t1), n_features=1)
    assert predict_forest(forest, X).tolist() == [0, 0]


def test_forest_deterministic_and_bootstrap_varies_trees():
    X, y = _blobs(n_per=50, seed=4)
    a = default_assignment("random_forest", bootstrap=True)
    m1 = models.train(X, y, a, seed=7, n_forest_trees=5)
    m2 = models.train(X, y, a, seed=7, n_forest_trees=5)
    assert np.array_equal(models.predict(m1, X), models.predict(m2, X))
    trees = m1.params.trees
    assert any(
        not np.array_equal(trees[0].threshold, t.threshold) for t in trees[1:]
    )


def test_forest_improves_or_matches_on_noise():
    rng = np.random.default_rng(8)
    X = rng.normal(size=(200, 6))
    y = ((X[:, 0] + X[:, 1] + rng.normal(0, 0.5, 200)) > 0).astype(int)
    a = default_assignment("random_forest", bootstrap=True)
    m = models.train(X, y, a, seed=0, n_forest_trees=25)
    acc = (models.predict(m, X) == y).mean()
    assert acc > 0.85


def test_logistic_separable_perfect_with_weak_penalty():
    X = np.array([[-3], [-2.5], [-2], [-1.5], [1.5], [2], [2.5], [3]], dtype=float)
    y = np.array([0, 0, 0, 0, 1, 1, 1, 1])
    a = default_assignment("logistic_regression", C=1000)
    m = models.train(X, y, a, seed=0)
    assert (models.predict(m, X) == y).all()


def test_logistic_penalty_none_ignores_c():
    X, y = _blobs(n_per=20)
    w1 = fit_logistic(X, y, c=0.001, penalty="none")
    w2 = fit_logistic(X, y, c=555.0, penalty="none")
    assert np.allclose(w1.weights, w2.weights)
    assert w1.intercept == pytest.approx(w2.intercept)


def test_logistic_stronger_penalty_shrinks_weights():
    X, y = _blobs(n_per=25, seed=2)
    small = fit_logistic(X, y, c=0.001, penalty="l2")
    large = fit_logistic(X, y, c=1000.0, penalty="l2")
    assert np.linalg.norm(small.weights) < np.linalg.norm(large.weights)


def test_logistic_deterministic():
    X, y = _blobs(n_per=30, seed=6)
    a = default_assignment("logistic_regression")
    m1 = models.train(X, y, a, seed=0)
    m2 = models.train(X, y, a, seed=123)  # seed is irrelevant to LR
    assert np.allclose(m1.params.weights, m2.params.weights)


@pytest.mark.parametrize("kernel", ["linear", "poly", "rbf", "sigmoid"])
def test_svc_separates_blobs(kernel):
    X, y = _blobs()
    a = default_assignment("svc", C=10, kernel=kernel)
    m = models.train(X, y, a, seed=1)
    assert (models.predict(m, X) == y).mean() >= 0.95


def test_svc_deterministic_per_seed():
    X, y = _blobs(n_per=30, seed=5)
    a = default_assignment("svc", kernel="rbf")
    m1 = models.train(X, y, a, seed=11)
    m2 = models.train(X, y, a, seed=11)
    assert np.allclose(m1.params.coef, m2.params.coef)


def test_svc_scale_gamma():
    X = np.array([[1.0, 2.0], [3.0, 4.0]])
    want = 1.0 / (2 * X.var())
    assert scale_gamma(X) == pytest.approx(want)


def test_kernel_matrix_shapes_and_linear_identity():
    rng = np.random.default_rng(0)
    A = rng.normal(size=(5, 3))
    B = rng.normal(size=(4, 3))
    K = kernel_matrix("linear", 0.5, A, B)
    assert K.shape == (5, 4)
    assert np.allclose(K, A @ B.T)
    K_rbf = kernel_matrix("rbf", 0.5, A, A)
    assert np.allclose(np.diag(K_rbf), 1.0)


def test_rf_predict_vote_threshold():
    X, y = _blobs(n_per=20, seed=1)
    a = default_assignment("random_forest", bootstrap=True)
    m = models.train(X, y, a, seed=3, n_forest_trees=3)
    preds = predict_forest(m.params, X)
    per_tree = np.stack([predict_tree(t, X) for t in m.params.trees])
    want = (per_tree.sum(axis=0) * 2 > 3).astype(per_tree.dtype)
    assert np.array_equal(preds, want)
