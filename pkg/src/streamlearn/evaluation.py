"""Prequential and holdout evaluation loops with running metrics."""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from .core import ConfigError, SchemaError, StreamLearnError, instances_to_arrays


class EvaluationError(StreamLearnError, RuntimeError):
    """A model failed during evaluation; ``samples_seen`` marks where."""

    def __init__(self, message, samples_seen):
        super().__init__(f"{message} (samples_seen={samples_seen})")
        self.samples_seen = samples_seen


def kappa_compute(confusion) -> float:
    """Cohen's kappa of a square confusion matrix (rows: truth, cols: prediction)."""
    cm = np.asarray(confusion, dtype=float)
    if cm.ndim != 2 or cm.shape[0] != cm.shape[1] or cm.size == 0:
        raise ValueError("confusion matrix must be square and non-empty")
    n = cm.sum()
    if n <= 0:
        raise ValueError("confusion matrix is empty")
    p_o = np.trace(cm) / n
    p_e = float((cm.sum(axis=1) * cm.sum(axis=0)).sum()) / (n * n)
    if p_e == 1.0:
        return 0.0
    return float((p_o - p_e) / (1.0 - p_e))


SINGLE_TARGET_METRICS = ("accuracy", "kappa", "window_accuracy", "window_kappa")
MULTI_TARGET_METRICS = ("hamming_loss", "exact_match", "window_hamming_loss", "window_exact_match")


class MetricSet:
    """Global and sliding-window metrics over (truth, prediction) pairs.

    Single-target streams track accuracy and Cohen's kappa; multi-target
    streams track hamming loss and exact match. The window covers the most
    recent ``window_size`` outcomes.
    """

    def __init__(self, target_cardinality, window_size=200):
        self.target_cardinality = tuple(target_cardinality)
        self.n_targets = len(self.target_cardinality)
        self.window_size = window_size
        self.n = 0
        self._window = deque()
        if self.n_targets == 1:
            k = self.target_cardinality[0]
            self.confusion = np.zeros((k, k), dtype=np.int64)
            self._w_confusion = np.zeros((k, k), dtype=np.int64)
            self._correct = 0
            self._w_correct = 0
        else:
            self._label_errors = 0
            self._exact = 0
            self._w_label_errors = 0
            self._w_exact = 0

    @property
    def names(self):
        return SINGLE_TARGET_METRICS if self.n_targets == 1 else MULTI_TARGET_METRICS

    def update(self, y, y_hat):
        y = np.asarray(y).ravel()
        y_hat = np.asarray(y_hat).ravel()
        if y.shape != (self.n_targets,) or y_hat.shape != (self.n_targets,):
            raise SchemaError(f"expected {self.n_targets} targets in truth and prediction")
        self.n += 1
        if self.n_targets == 1:
            t, p = int(y[0]), int(y_hat[0])
            self.confusion[t, p] += 1
            self._w_confusion[t, p] += 1
            self._correct += t == p
            self._w_correct += t == p
            self._window.append((t, p))
            if len(self._window) > self.window_size:
                ot, op = self._window.popleft()
                self._w_confusion[ot, op] -= 1
                self._w_correct -= ot == op
        else:
            errs = int((y != y_hat).sum())
            exact = int(errs == 0)
            self._label_errors += errs
            self._exact += exact
            self._w_label_errors += errs
            self._w_exact += exact
            self._window.append((errs, exact))
            if len(self._window) > self.window_size:
                oe, ox = self._window.popleft()
                self._w_label_errors -= oe
                self._w_exact -= ox

    def update_batch(self, Y, Y_hat):
        Y = np.asarray(Y).reshape(-1, self.n_targets)
        Y_hat = np.asarray(Y_hat).reshape(-1, self.n_targets)
        if Y.shape != Y_hat.shape:
            raise SchemaError("truth and prediction batches differ in shape")
        for i in range(len(Y)):
            self.update(Y[i], Y_hat[i])

    def window_outcomes(self):
        return list(self._window)

    def values(self) -> Dict[str, float]:
        nan = float("nan")
        w = len(self._window)
        if self.n_targets == 1:
            return {
                "accuracy": self._correct / self.n if self.n else nan,
                "kappa": kappa_compute(self.confusion) if self.n else nan,
                "window_accuracy": self._w_correct / w if w else nan,
                "window_kappa": kappa_compute(self._w_confusion) if w else nan,
            }
        L = self.n_targets
        return {
            "hamming_loss": self._label_errors / (self.n * L) if self.n else nan,
            "exact_match": self._exact / self.n if self.n else nan,
            "window_hamming_loss": self._w_label_errors / (w * L) if w else nan,
            "window_exact_match": self._w_exact / w if w else nan,
        }


@dataclass
class EvalConfig:
    """Evaluator settings.

    ``max_samples`` counts training instances, pretraining included. The
    holdout fields are ignored by the prequential loop.
    """

    max_samples: int = 100_000
    batch_size: int = 1
    sample_frequency: int = 200
    pretrain_size: int = 200
    test_size: int = 1000
    test_interval: int = 1000
    window_size: int = 200
    timing: bool = True

    def __post_init__(self):
        for name in ("max_samples", "batch_size", "sample_frequency", "test_size",
                     "test_interval", "window_size"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < 1:
                raise ConfigError(f"{name} must be a positive integer")
        if not isinstance(self.pretrain_size, (int, np.integer)) or self.pretrain_size < 0:
            raise ConfigError("pretrain_size must be a non-negative integer")
        if self.pretrain_size > self.max_samples:
            raise ConfigError("pretrain_size exceeds max_samples")


@dataclass
class EvaluationRecord:
    samples_seen: int
    wall_time_s: float
    metrics: Dict[str, Dict[str, float]] = field(default_factory=dict)
    truncated: bool = False


def _named(models):
    if isinstance(models, dict):
        return list(models.keys()), list(models.values())
    models = list(models)
    return [f"M{i}" for i in range(len(models))], models


def _targets(Y, schema):
    return Y[:, 0] if schema.n_targets == 1 else Y


def _draw(stream, n):
    out = []
    while len(out) < n:
        got = stream.next_sample(n - len(out))
        if not got:
            break
        out.extend(got)
    return out


class _Clock:
    def __init__(self, enabled):
        self.enabled = enabled
        self.start = time.perf_counter()

    def elapsed(self):
        return time.perf_counter() - self.start if self.enabled else 0.0


def _train_all(names, models, X, y, classes, seen):
    for name, model in zip(names, models):
        try:
            model.partial_fit(X, y, classes=classes)
        except Exception as exc:
            raise EvaluationError(f"model {name!r} failed in partial_fit: {exc}", seen) from exc


def _predict(name, model, X, n_targets, seen):
    try:
        return np.asarray(model.predict(X)).reshape(len(X), n_targets)
    except Exception as exc:
        raise EvaluationError(f"model {name!r} failed in predict: {exc}", seen) from exc


def _pretrain(stream, names, models, config, classes):
    if not config.pretrain_size:
        return 0
    batch = _draw(stream, config.pretrain_size)
    if len(batch) < config.pretrain_size:
        raise ConfigError(f"stream exhausted after {len(batch)} samples, "
                          f"before pretrain_size={config.pretrain_size}")
    X, Y = instances_to_arrays(batch)
    _train_all(names, models, X, _targets(Y, stream.schema), classes, 0)
    return len(batch)


def prequential_run(stream, models, config: EvalConfig = None) -> List[EvaluationRecord]:
    """Interleaved test-then-train over ``stream``.

    After an optional pretraining phase (training only), each batch is first
    predicted and scored by every model, then used to train it. All models
    see the same batches. A record is emitted whenever ``samples_seen``
    reaches ``pretrain_size + k * sample_frequency`` and once at the end.
    """
    config = config or EvalConfig()
    names, models = _named(models)
    schema = stream.schema
    classes = schema.classes()
    metrics = {n: MetricSet(schema.target_cardinality, config.window_size) for n in names}
    clock = _Clock(config.timing)

    def record():
        return EvaluationRecord(seen, clock.elapsed(),
                                {n: metrics[n].values() for n in names})

    seen = _pretrain(stream, names, models, config, classes)
    next_record = seen + config.sample_frequency
    records = []
    while seen < config.max_samples:
        batch = stream.next_sample(min(config.batch_size, config.max_samples - seen))
        if not batch:
            break
        X, Y = instances_to_arrays(batch)
        y = _targets(Y, schema)
        for name, model in zip(names, models):
            metrics[name].update_batch(Y, _predict(name, model, X, schema.n_targets, seen))
            _train_all([name], [model], X, y, classes, seen)
        seen += len(batch)
        if seen >= next_record:
            records.append(record())
            while next_record <= seen:
                next_record += config.sample_frequency
    if not records or records[-1].samples_seen != seen:
        records.append(record())
    return records


def holdout_run(stream, models, config: EvalConfig = None) -> List[EvaluationRecord]:
    """Periodic holdout: train on ``test_interval`` instances, then score a fresh test batch.

    Test batches of ``test_size`` instances are drawn from the stream after
    each training interval and never trained on; metrics of each record
    cover that test batch only. ``samples_seen`` counts training instances.
    A test batch cut short by stream exhaustion yields a record flagged
    ``truncated``.
    """
    config = config or EvalConfig()
    names, models = _named(models)
    schema = stream.schema
    classes = schema.classes()
    clock = _Clock(config.timing)

    trained = _pretrain(stream, names, models, config, classes)
    records = []
    exhausted = False
    while trained < config.max_samples and not exhausted:
        target = min(trained + config.test_interval, config.max_samples)
        while trained < target:
            batch = stream.next_sample(min(config.batch_size, target - trained))
            if not batch:
                exhausted = True
                break
            X, Y = instances_to_arrays(batch)
            _train_all(names, models, X, _targets(Y, schema), classes, trained)
            trained += len(batch)
        test = _draw(stream, config.test_size)
        if not test or (records and records[-1].samples_seen == trained):
            break
        X, Y = instances_to_arrays(test)
        metrics = {}
        for name, model in zip(names, models):
            ms = MetricSet(schema.target_cardinality, config.window_size)
            ms.update_batch(Y, _predict(name, model, X, schema.n_targets, trained))
            metrics[name] = ms.values()
        truncated = len(test) < config.test_size
        records.append(EvaluationRecord(trained, clock.elapsed(), metrics, truncated))
        if truncated:
            break
    return records
