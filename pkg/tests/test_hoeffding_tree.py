import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import oracle_split_decision
from streamlearn import HoeffdingTreeClassifier, RandomRBFGenerator, hoeffding_bound
from streamlearn import EvalConfig, instances_to_arrays, prequential_run
from streamlearn.learners.hoeffding_tree import Leaf, Split


def test_bound_reference_value():
    assert hoeffding_bound(1.0, 1e-7, 1000) == pytest.approx(math.sqrt(math.log(1e7) / 2000))
    assert hoeffding_bound(1.0, 1e-7, 1000) == pytest.approx(0.08977, abs=1e-5)


def test_bound_delta_one_is_zero():
    assert hoeffding_bound(1.0, 1.0, 10) == 0.0


@pytest.mark.parametrize("args", [(0.0, 0.1, 5), (1.0, 0.0, 5), (1.0, 1.5, 5), (1.0, 0.1, 0)])
def test_bound_rejects_bad_arguments(args):
    with pytest.raises(ValueError):
        hoeffding_bound(*args)


@given(st.floats(0.01, 10), st.floats(1e-12, 0.99), st.integers(1, 10**6))
def test_bound_quarter_n_halves(r, delta, n):
    assert hoeffding_bound(r, delta, 4 * n) == hoeffding_bound(r, delta, n) / 2


def test_pure_leaf_never_splits():
    tree = HoeffdingTreeClassifier(grace_period=50)
    X = np.random.default_rng(0).random((2000, 3))
    tree.partial_fit(X, np.zeros(2000, dtype=int), classes=[0, 1])
    assert tree.n_split_nodes == 0 and tree.n_split_attempts == 40


def test_relevant_feature_chosen_and_matches_oracle():
    rng = np.random.default_rng(1)
    X = rng.random((1000, 3))
    y = (X[:, 0] > 0.5).astype(int)
    tree = HoeffdingTreeClassifier(grace_period=1000, record_split_attempts=True)
    tree.partial_fit(X, y)
    entry = tree.split_log[0]
    feature, threshold, _ = oracle_split_decision(entry["stats"], 10, 2, 1e-7, 0.05)
    assert entry["decision"][0] == feature == 0
    assert entry["decision"][1] == pytest.approx(threshold, rel=1e-12)
    assert isinstance(tree._root, Split) and tree._root.feature == 0


def test_identical_features_tie_goes_to_lowest_index():
    rng = np.random.default_rng(2)
    u = rng.random(4000)
    X = np.column_stack([rng.random(4000), u, u])
    y = (u > 0.4).astype(int)
    tree = HoeffdingTreeClassifier(grace_period=200, record_split_attempts=True)
    tree.partial_fit(X, y)
    first = next(e for e in tree.split_log if e["decision"] is not None)
    assert first["gains"][1] == first["gains"][2]
    assert first["eps"] < 0.05
    assert first["decision"][0] == 1


def test_laplace_leaf_prediction():
    tree = HoeffdingTreeClassifier()
    tree.partial_fit(np.zeros((9, 1)), np.zeros(9, dtype=int), classes=[0, 1])
    np.testing.assert_allclose(tree.predict_proba([[0.0]]), [[10 / 11, 1 / 11]])


def test_fresh_tree_uniform():
    np.testing.assert_allclose(HoeffdingTreeClassifier().predict_proba([[0.0, 1.0]]),
                               [[0.5, 0.5]])


def test_routing_uses_left_branch():
    tree = HoeffdingTreeClassifier()
    tree.partial_fit([[0.9, 0.0]], [0], classes=[0, 1])
    left, right = Leaf(2, 2), Leaf(2, 2)
    left.stats.update(np.array([0.3, 0.0]), 1, 3.0)
    right.stats.update(np.array([0.8, 0.0]), 0, 3.0)
    tree._root = Split(0, 0.5, left, right)
    np.testing.assert_allclose(tree.predict_proba([[0.3, 7.0]]), [[1 / 5, 4 / 5]])
    np.testing.assert_allclose(tree.predict_proba([[0.7, 7.0]]), [[4 / 5, 1 / 5]])


def test_nb_leaves_beat_majority_leaves():
    acc = {}
    for mode in ("mc", "nb"):
        stream = RandomRBFGenerator(n_features=3, seed_model=1, seed_sample=2)
        records = prequential_run(stream, [HoeffdingTreeClassifier(leaf_prediction=mode)],
                                  EvalConfig(max_samples=5000, timing=False))
        acc[mode] = records[-1].metrics["M0"]["accuracy"]
    assert acc["nb"] > acc["mc"]


def test_split_decisions_match_oracle_over_run():
    X, Y = instances_to_arrays(RandomRBFGenerator(n_classes=3, n_features=4, n_centroids=10,
                                                  seed_model=3, seed_sample=4).next_sample(20_000))
    tree = HoeffdingTreeClassifier(record_split_attempts=True)
    tree.partial_fit(X, Y[:, 0], classes=[0, 1, 2])
    assert tree.n_split_nodes > 0
    for entry in tree.split_log:
        feature, threshold, gains = oracle_split_decision(entry["stats"], 10, 3, 1e-7, 0.05)
        np.testing.assert_allclose(entry["gains"], [g for g, _ in gains], atol=1e-9)
        if feature is None:
            assert entry["decision"] is None
        else:
            assert entry["decision"][0] == feature
            assert entry["decision"][1] == pytest.approx(threshold, rel=1e-9)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**31), st.integers(20, 200))
def test_structure_invariants(seed, grace):
    rng = np.random.default_rng(seed)
    n = 3000
    X = rng.random((n, 2))
    y = ((X[:, 0] + 0.3 * rng.standard_normal(n)) > X[:, 1]).astype(int)
    tree = HoeffdingTreeClassifier(grace_period=grace)
    tree.partial_fit(X, y)
    leaves = tree.leaves()
    assert len(leaves) == tree.n_leaves == tree.n_split_nodes + 1
    assert tree.n_split_nodes <= n // grace
    # with splitting frozen, leaf counts grow by exactly the instances routed to them
    tree.grace_period = 10**9
    fresh = np.random.default_rng(seed + 1).random((500, 2))
    labels = (fresh[:, 0] > 0.5).astype(int)
    before = {id(leaf): leaf.stats.counts.copy() for leaf in leaves}
    routed = {id(leaf): np.zeros(2) for leaf in leaves}
    for x, lab in zip(fresh, labels):
        routed[id(tree._route(x)[0])][lab] += 1
    tree.partial_fit(fresh, labels)
    for leaf in tree.leaves():
        np.testing.assert_array_equal(leaf.stats.counts - before[id(leaf)], routed[id(leaf)])
