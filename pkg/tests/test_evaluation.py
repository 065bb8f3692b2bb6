import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from streamlearn import (ConfigError, DataStream, EvalConfig, EvaluationError,
                         MajorityClassClassifier, MetricSet, NoChangeClassifier,
                         RandomRBFGenerator, SEAGenerator, holdout_run, kappa_compute,
                         prequential_run)
from streamlearn.core import Classifier
from streamlearn.generators import Centroid


# --- metrics ----------------------------------------------------------------

def test_kappa_unit_values():
    assert kappa_compute(np.diag([5, 5])) == 1.0
    assert kappa_compute([[25, 25], [25, 25]]) == 0.0
    assert kappa_compute([[40, 10], [20, 30]]) == pytest.approx(0.4, abs=1e-12)


def test_kappa_matches_sklearn_style_definition():
    rng = np.random.default_rng(0)
    y, p = rng.integers(0, 3, 500), rng.integers(0, 3, 500)
    cm = np.zeros((3, 3))
    np.add.at(cm, (y, p), 1)
    p_o = np.mean(y == p)
    p_e = sum(np.mean(y == c) * np.mean(p == c) for c in range(3))
    assert kappa_compute(cm) == pytest.approx((p_o - p_e) / (1 - p_e))


def test_kappa_degenerate_and_invalid():
    assert kappa_compute([[4, 0], [0, 0]]) == 0.0
    with pytest.raises(ValueError):
        kappa_compute(np.zeros((2, 2)))
    with pytest.raises(ValueError):
        kappa_compute(np.zeros((2, 3)))


def test_hamming_and_exact_match_contribution():
    ms = MetricSet((2, 2, 2))
    ms.update([1, 0, 1], [1, 1, 1])
    v = ms.values()
    assert v["hamming_loss"] == pytest.approx(1 / 3)
    assert v["exact_match"] == 0.0


def test_perfect_predictions_give_kappa_one():
    ms = MetricSet((3,))
    for t in np.random.default_rng(1).integers(0, 3, 400):
        ms.update([t], [t])
    assert ms.values()["kappa"] == 1.0
    assert ms.values()["accuracy"] == 1.0


def test_chance_predictor_kappa_near_zero():
    rng = np.random.default_rng(2)
    ms = MetricSet((2,))
    ms.update_batch(rng.integers(0, 2, 20_000), rng.integers(0, 2, 20_000))
    assert abs(ms.values()["kappa"]) <= 0.05


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=500),
       st.integers(1, 50))
def test_metric_ranges_and_window_cover(pairs, window):
    ms = MetricSet((3,), window_size=window)
    for t, p in pairs:
        ms.update([t], [p])
    v = ms.values()
    assert 0 <= v["accuracy"] <= 1 and 0 <= v["window_accuracy"] <= 1
    assert -1 <= v["kappa"] <= 1 and -1 <= v["window_kappa"] <= 1
    recent = pairs[-window:]
    assert ms.window_outcomes() == list(recent)
    assert v["window_accuracy"] == pytest.approx(np.mean([t == p for t, p in recent]))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(0, 1), min_size=3, max_size=3), min_size=1, max_size=100))
def test_multi_target_metric_ranges(rows):
    ms = MetricSet((2, 2, 2), window_size=10)
    rng = np.random.default_rng(len(rows))
    for r in rows:
        ms.update(r, rng.integers(0, 2, 3))
    for name, value in ms.values().items():
        assert 0 <= value <= 1, name


# --- prequential ------------------------------------------------------------

def test_no_change_on_alternating_labels_scores_zero():
    y = np.arange(500) % 2
    recs = prequential_run(DataStream(np.zeros((500, 1)), y), [NoChangeClassifier()],
                           EvalConfig(max_samples=500, pretrain_size=1))
    assert recs[-1].metrics["M0"]["accuracy"] == 0.0


def test_majority_on_constant_stream_scores_one():
    recs = prequential_run(DataStream(np.zeros((300, 1)), np.zeros(300, dtype=int)),
                           [MajorityClassClassifier()],
                           EvalConfig(max_samples=300, pretrain_size=0))
    assert recs[-1].metrics["M0"]["accuracy"] == 1.0


def test_record_schedule_and_monotone_samples_seen():
    recs = prequential_run(SEAGenerator(seed=1), {"m": MajorityClassClassifier()},
                           EvalConfig(max_samples=1050, pretrain_size=50, sample_frequency=200,
                                      batch_size=7, timing=False))
    seen = [r.samples_seen for r in recs]
    assert seen == sorted(set(seen))
    assert seen[-1] == 1050
    assert all(r.wall_time_s == 0.0 for r in recs)
    assert seen[0] >= 250


def test_stream_shorter_than_max_samples_ends_cleanly():
    recs = prequential_run(DataStream(np.zeros((120, 1)), np.zeros(120, dtype=int)),
                           [MajorityClassClassifier()],
                           EvalConfig(max_samples=1000, pretrain_size=20))
    assert recs[-1].samples_seen == 120


def test_pretrain_exhausting_stream_is_config_error():
    with pytest.raises(ConfigError):
        prequential_run(DataStream(np.zeros((10, 1)), np.zeros(10, dtype=int)),
                        [MajorityClassClassifier()], EvalConfig(pretrain_size=50))


class Exploding(MajorityClassClassifier):
    def __init__(self, at=100):
        self.at = at
        self.calls = 0
        super().__init__()

    def partial_fit(self, X, y, classes=None, sample_weight=None):
        self.calls += len(y)
        if self.calls > self.at:
            raise RuntimeError("boom")
        return super().partial_fit(X, y, classes=classes, sample_weight=sample_weight)


def test_model_failure_reports_samples_seen():
    with pytest.raises(EvaluationError) as err:
        prequential_run(SEAGenerator(), {"bad": Exploding(at=300)},
                        EvalConfig(max_samples=1000, pretrain_size=0))
    assert err.value.samples_seen == 300
    assert "bad" in str(err.value)


@pytest.mark.parametrize("kwargs", [{"sample_frequency": 0}, {"pretrain_size": -1},
                                    {"batch_size": 0}, {"max_samples": 10, "pretrain_size": 20}])
def test_eval_config_validation(kwargs):
    with pytest.raises(ConfigError):
        EvalConfig(**kwargs)


# --- holdout ----------------------------------------------------------------

class Oracle(Classifier):
    """Knows the SEA rule; a stand-in for a perfect model."""

    def __init__(self):
        self.reset()

    def _reset_model(self):
        pass

    def _learn_one(self, x, y, w):
        pass

    def predict(self, X):
        X = np.asarray(X)
        return (X[:, 0] + X[:, 1] <= 8.0).astype(int)


class SerialLogger(MajorityClassClassifier):
    def __init__(self):
        self.trained, self.tested = [], []
        super().__init__()

    def partial_fit(self, X, y, classes=None, sample_weight=None):
        self.trained.extend(np.asarray(X)[:, 0].tolist())
        return super().partial_fit(X, y, classes=classes, sample_weight=sample_weight)

    def predict(self, X):
        self.tested.extend(np.asarray(X)[:, 0].tolist())
        return super().predict(X)


def test_holdout_perfect_model_scores_one():
    recs = holdout_run(SEAGenerator(seed=4), [Oracle()],
                       EvalConfig(max_samples=5000, test_size=300, test_interval=1000))
    assert len(recs) == 5
    assert all(r.metrics["M0"]["accuracy"] == 1.0 for r in recs)


def test_holdout_test_and_train_disjoint():
    n = 8000
    stream = DataStream(np.arange(n, dtype=float).reshape(-1, 1), np.arange(n) % 2)
    spy = SerialLogger()
    recs = holdout_run(stream, [spy], EvalConfig(max_samples=5000, test_size=200,
                                                 test_interval=500))
    assert not set(spy.trained) & set(spy.tested)
    assert [r.samples_seen for r in recs] == list(range(700, 5001, 500)) + [5000]


def test_holdout_balanced_rbf_majority_near_half():
    cents = [Centroid(np.full(2, 0.3), 0, 0.1, 1.0), Centroid(np.full(2, 0.7), 1, 0.1, 1.0)]
    stream = RandomRBFGenerator(n_features=2, centroids=cents, seed_sample=5)
    recs = holdout_run(stream, [MajorityClassClassifier()],
                       EvalConfig(max_samples=20_000, test_size=1000, test_interval=1000))
    assert len(recs) >= 19
    for r in recs:
        assert abs(r.metrics["M0"]["accuracy"] - 0.5) <= 0.03


def test_holdout_truncated_batch_flagged():
    stream = DataStream(np.zeros((1100, 1)), np.zeros(1100, dtype=int))
    recs = holdout_run(stream, [MajorityClassClassifier()],
                       EvalConfig(max_samples=5000, pretrain_size=0, test_size=500,
                                  test_interval=1000))
    assert recs[-1].truncated and recs[-1].samples_seen == 1000


def test_both_loops_give_each_model_the_same_data():
    models = {"a": MajorityClassClassifier(), "b": MajorityClassClassifier()}
    recs = prequential_run(SEAGenerator(seed=8), models, EvalConfig(max_samples=2000))
    assert recs[-1].metrics["a"] == recs[-1].metrics["b"]
    assert math.isfinite(recs[-1].metrics["a"]["kappa"])
