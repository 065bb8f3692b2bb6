import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from streamlearn import (Instance, MajorityClassClassifier, SchemaError, StreamSchema,
                         UndeclaredClassError, instances_to_arrays)
from streamlearn.core import BaseEstimator, normalize
from streamlearn.learners import GaussianNaiveBayes, HoeffdingTreeClassifier, KNNClassifier


def test_schema_default_names():
    s = StreamSchema(3, 1, (2,))
    assert s.feature_names == ("att_0", "att_1", "att_2")
    assert s.target_names == ("class",)
    assert s.classes() == [0, 1]
    m = StreamSchema(2, 3, (2, 2, 3))
    assert m.target_names == ("label_0", "label_1", "label_2")
    assert m.classes() == [[0, 1], [0, 1], [0, 1, 2]]
    assert m.is_multi_target


@pytest.mark.parametrize("args", [(0, 1, (2,)), (2, 0, ()), (2, 1, (1,)), (2, 2, (2,))])
def test_schema_rejects_bad_shapes(args):
    with pytest.raises(SchemaError):
        StreamSchema(*args)


def test_schema_validate():
    s = StreamSchema(2, 1, (2,))
    s.validate(Instance(np.zeros(2), np.array([1])))
    with pytest.raises(SchemaError):
        s.validate(Instance(np.zeros(3), np.array([1])))
    with pytest.raises(SchemaError):
        s.validate(Instance(np.zeros(2), np.array([2])))


def test_instances_to_arrays_shapes():
    insts = [Instance(np.array([1.0, 2.0]), np.array([0])),
             Instance(np.array([3.0, 4.0]), np.array([1]))]
    X, Y = instances_to_arrays(insts)
    assert X.shape == (2, 2) and Y.shape == (2, 1)
    X1, Y1 = instances_to_arrays(insts[:1])
    assert X1.shape == (1, 2) and Y1.tolist() == [[0]]
    X0, Y0 = instances_to_arrays([], n_features=2)
    assert X0.shape == (0, 2) and Y0.shape == (0, 1)


def test_majority_counts_and_prediction():
    m = MajorityClassClassifier()
    m.partial_fit([[0.0], [0.0], [0.0]], [0, 0, 1])
    assert m.class_counts == {0: 2.0, 1: 1.0}
    assert m.predict([[5.0]]).tolist() == [0]
    m.partial_fit([[0.0]], [0])
    np.testing.assert_allclose(m.predict_proba([[0.0]]), [[0.75, 0.25]])


def test_tie_goes_to_lowest_class():
    m = MajorityClassClassifier()
    m.partial_fit(np.zeros((10, 1)), [0, 1] * 5)
    assert m.predict([[0.0]]).tolist() == [0]


@pytest.mark.parametrize("cls", [MajorityClassClassifier, GaussianNaiveBayes, KNNClassifier,
                                 HoeffdingTreeClassifier])
def test_untrained_fallback(cls):
    m = cls()
    np.testing.assert_allclose(m.predict_proba(np.zeros((3, 2))), np.full((3, 2), 0.5))
    assert m.predict(np.zeros((3, 2))).tolist() == [0, 0, 0]


def test_feature_arity_change_is_schema_error():
    m = MajorityClassClassifier()
    m.partial_fit([[1.0, 2.0, 3.0]], [0])
    with pytest.raises(SchemaError):
        m.partial_fit([[1.0, 2.0, 3.0, 4.0]], [0])


def test_empty_update_is_noop():
    m = MajorityClassClassifier()
    m.partial_fit(np.empty((0, 2)), [])
    assert not m.is_trained
    m.partial_fit([], [])
    assert m.class_counts == {}


def test_undeclared_class():
    m = MajorityClassClassifier()
    m.partial_fit([[0.0]], [0], classes=[0, 1])
    with pytest.raises(UndeclaredClassError):
        m.partial_fit([[0.0]], [2])


def test_classes_inferred_from_first_batch():
    m = MajorityClassClassifier()
    m.partial_fit([[0.0], [0.0]], [0, 2])
    assert m.n_classes == 3
    assert m.predict_proba([[0.0]]).shape == (1, 3)


def test_non_integer_labels_rejected():
    with pytest.raises(SchemaError):
        MajorityClassClassifier().partial_fit([[0.0]], [0.5])


def test_fit_equals_fresh_partial_fit():
    rng = np.random.default_rng(0)
    X, y = rng.random((300, 3)), rng.integers(0, 2, 300)
    a = GaussianNaiveBayes().fit(X, y)
    b = GaussianNaiveBayes().partial_fit(X, y)
    Q = rng.random((50, 3))
    np.testing.assert_array_equal(a.predict_proba(Q), b.predict_proba(Q))


def test_fit_twice_resets():
    rng = np.random.default_rng(1)
    X, y = rng.random((200, 2)), rng.integers(0, 2, 200)
    m = GaussianNaiveBayes()
    m.fit(X[:100], y[:100])
    m.fit(X[100:], y[100:])
    ref = GaussianNaiveBayes().partial_fit(X[100:], y[100:])
    np.testing.assert_array_equal(m.predict_proba(X), ref.predict_proba(X))


def test_fit_empty_is_untrained():
    m = MajorityClassClassifier()
    m.partial_fit([[1.0]], [1])
    m.fit(np.empty((0, 1)), [])
    np.testing.assert_allclose(m.predict_proba([[0.0]]), [[0.5, 0.5]])


def test_sample_weight():
    m = MajorityClassClassifier()
    m.partial_fit([[0.0], [0.0]], [0, 1], sample_weight=[1.0, 3.0])
    np.testing.assert_allclose(m.predict_proba([[0.0]]), [[0.25, 0.75]])
    with pytest.raises(SchemaError):
        m.partial_fit([[0.0]], [0], sample_weight=[-1.0])


def test_get_params_and_clone():
    knn = KNNClassifier(n_neighbors=3, max_window_size=50)
    assert knn.get_params() == {"n_neighbors": 3, "max_window_size": 50}
    knn.partial_fit([[0.0]], [1])
    c = knn.clone()
    assert isinstance(c, BaseEstimator) and c.get_params() == knn.get_params()
    assert not c.is_trained


@given(st.lists(st.floats(0, 1e6, allow_nan=False), min_size=1, max_size=8))
def test_normalize_is_distribution(values):
    p = normalize(values, len(values))
    assert p.shape == (len(values),)
    assert np.all(p >= 0)
    assert abs(p.sum() - 1) < 1e-9


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=60))
def test_predict_is_argmax_of_proba(labels):
    m = MajorityClassClassifier()
    m.partial_fit(np.zeros((len(labels), 1)), labels, classes=[0, 1, 2, 3])
    p = m.predict_proba([[0.0]])[0]
    assert abs(p.sum() - 1) < 1e-12
    assert m.predict([[0.0]])[0] == int(np.argmax(p))
    counts = np.bincount(labels, minlength=4)
    assert m.predict([[0.0]])[0] == int(np.flatnonzero(counts == counts.max())[0])
