"""Data model and base contracts shared by streams, models and detectors."""

from __future__ import annotations

import enum
import inspect
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np


class StreamLearnError(Exception):
    """Base class for errors raised by this package."""


class SchemaError(StreamLearnError, ValueError):
    """Input arity does not match what the model or stream expects."""


class UndeclaredClassError(StreamLearnError, ValueError):
    """A label appeared that was not declared on the first ``partial_fit``."""


class ParseError(StreamLearnError, ValueError):
    """A file-backed stream hit a malformed row."""

    def __init__(self, message: str, row: int):
        super().__init__(f"row {row}: {message}")
        self.row = row


class ConfigError(StreamLearnError, ValueError):
    """Invalid experiment or evaluator configuration."""


class DetectionStatus(enum.Enum):
    NORMAL = "normal"
    WARNING = "warning"
    DRIFT = "drift"


@dataclass(frozen=True)
class StreamSchema:
    """Shape of the instances a stream emits.

    ``target_cardinality[j]`` is the number of classes of target ``j``. A
    single-output stream has ``n_targets == 1``; a multi-label stream has one
    binary target per label.
    """

    n_features: int
    n_targets: int
    target_cardinality: tuple
    feature_names: tuple = ()
    target_names: tuple = ()

    def __post_init__(self):
        if self.n_features < 1 or self.n_targets < 1:
            raise SchemaError("n_features and n_targets must be positive")
        card = tuple(int(k) for k in self.target_cardinality)
        if len(card) != self.n_targets:
            raise SchemaError("target_cardinality must have one entry per target")
        if any(k < 2 for k in card):
            raise SchemaError("every target needs at least 2 classes")
        object.__setattr__(self, "target_cardinality", card)
        if not self.feature_names:
            object.__setattr__(self, "feature_names",
                               tuple(f"att_{i}" for i in range(self.n_features)))
        if not self.target_names:
            names = ("class",) if self.n_targets == 1 else tuple(
                f"label_{j}" for j in range(self.n_targets))
            object.__setattr__(self, "target_names", names)
        if len(self.feature_names) != self.n_features or len(self.target_names) != self.n_targets:
            raise SchemaError("name vectors do not match feature/target counts")

    @property
    def is_multi_target(self) -> bool:
        return self.n_targets > 1

    def classes(self):
        """Class lists as expected by ``partial_fit(classes=...)``."""
        if self.n_targets == 1:
            return list(range(self.target_cardinality[0]))
        return [list(range(k)) for k in self.target_cardinality]

    def validate(self, inst: "Instance") -> None:
        if inst.features.shape != (self.n_features,):
            raise SchemaError(f"expected {self.n_features} features, got {inst.features.shape}")
        if inst.targets.shape != (self.n_targets,):
            raise SchemaError(f"expected {self.n_targets} targets, got {inst.targets.shape}")
        for j, k in enumerate(self.target_cardinality):
            if not 0 <= inst.targets[j] < k:
                raise SchemaError(f"target {j} value {inst.targets[j]} outside [0, {k})")
        if inst.weight < 0:
            raise SchemaError("instance weight must be non-negative")


@dataclass(eq=False)
class Instance:
    """One stream element.

    ``serial`` is the 0-based position of the instance in its stream since the
    last restart; evaluators use it to prove which instances were used where.
    """

    features: np.ndarray
    targets: np.ndarray
    weight: float = 1.0
    serial: int = -1

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (np.array_equal(self.features, other.features)
                and np.array_equal(self.targets, other.targets)
                and self.weight == other.weight
                and self.serial == other.serial)

    __hash__ = None


def instances_to_arrays(instances: Sequence[Instance], n_features: Optional[int] = None,
                        n_targets: Optional[int] = None):
    """Stack instances into ``X`` of shape (n, d) and ``Y`` of shape (n, n_targets)."""
    if not instances:
        return (np.empty((0, n_features or 0)), np.empty((0, n_targets or 1), dtype=np.int64))
    if len(instances) == 1:
        inst = instances[0]
        return (inst.features.reshape(1, -1).astype(float, copy=False),
                inst.targets.reshape(1, -1).astype(np.int64, copy=False))
    X = np.vstack([inst.features for inst in instances]).astype(float, copy=False)
    Y = np.vstack([inst.targets for inst in instances]).astype(np.int64, copy=False)
    return X, Y


class Stream:
    """Base class for instance sources.

    Subclasses implement ``_next_instance`` (return ``None`` once exhausted)
    and ``_reset_state``; restarting must leave the stream indistinguishable
    from a freshly constructed one.
    """

    schema: StreamSchema

    def __init__(self):
        self._serial = 0

    def next_sample(self, n: int = 1) -> list:
        if n < 1:
            raise ValueError("n must be a positive integer")
        out = []
        for _ in range(n):
            inst = self._next_instance()
            if inst is None:
                break
            inst.serial = self._serial
            self._serial += 1
            out.append(inst)
        return out

    def restart(self) -> None:
        self._serial = 0
        self._reset_state()

    def n_remaining_samples(self) -> Optional[int]:
        """Remaining count for finite streams, ``None`` for unbounded ones."""
        return None

    def has_more_samples(self) -> bool:
        remaining = self.n_remaining_samples()
        return remaining is None or remaining > 0

    @property
    def samples_emitted(self) -> int:
        return self._serial

    def _next_instance(self) -> Optional[Instance]:
        raise NotImplementedError

    def _reset_state(self) -> None:
        raise NotImplementedError


class BaseEstimator:
    """Parameter handling in the scikit-learn style.

    Constructor arguments are stored under attributes of the same name, so
    ``get_params`` can read them back and ``clone`` can rebuild an untrained
    copy.
    """

    def get_params(self) -> dict:
        sig = inspect.signature(type(self).__init__)
        return {name: getattr(self, name) for name in sig.parameters
                if name != "self" and hasattr(self, name)}

    def clone(self):
        params = {k: (v.clone() if isinstance(v, BaseEstimator) else v)
                  for k, v in self.get_params().items()}
        return type(self)(**params)

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"


class StreamModel(BaseEstimator):
    """Incremental classifier contract.

    ``partial_fit`` learns from a batch without revisiting earlier data,
    ``fit`` is ``reset`` followed by one ``partial_fit`` pass, and ``predict``
    returns the lowest-index argmax of ``predict_proba``.
    """

    def reset(self):
        raise NotImplementedError

    def fit(self, X, y, classes=None, sample_weight=None):
        self.reset()
        return self.partial_fit(X, y, classes=classes, sample_weight=sample_weight)

    def partial_fit(self, X, y, classes=None, sample_weight=None):
        raise NotImplementedError

    def predict(self, X):
        raise NotImplementedError

    def predict_proba(self, X):
        raise NotImplementedError


class Classifier(StreamModel):
    """Single-target classifier with shared input validation.

    Subclasses implement ``_reset_model``, ``_learn_one(x, y, w)`` and
    ``_proba_one(x)``; the latter may return an unnormalized non-negative
    vector of length ``n_classes``, or ``None`` to request the uniform
    fallback.
    """

    def reset(self):
        self._n_features = None
        self._n_classes = None
        self._reset_model()
        return self

    def _reset_model(self):
        raise NotImplementedError

    @property
    def n_classes(self) -> int:
        return self._n_classes or 2

    @property
    def is_trained(self) -> bool:
        return self._n_features is not None

    def _check_X(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1 and X.size == 0:
            X = X.reshape(0, self._n_features or 0)
        elif X.ndim == 1:
            X = X.reshape(1, -1)
        if X.ndim != 2:
            raise SchemaError("X must be 2-dimensional")
        if self._n_features is not None and X.shape[0] and X.shape[1] != self._n_features:
            raise SchemaError(f"expected {self._n_features} features, got {X.shape[1]}")
        return X

    def _declare_classes(self, classes, y) -> None:
        if classes is not None:
            classes = [int(c) for c in classes]
            if any(c < 0 for c in classes):
                raise UndeclaredClassError("class labels must be non-negative integers")
            self._n_classes = max(2, max(classes) + 1) if classes else 2
        elif len(y):
            self._n_classes = max(2, int(y.max()) + 1)

    def partial_fit(self, X, y, classes=None, sample_weight=None):
        X = self._check_X(X)
        y = np.asarray(y)
        if y.ndim == 2 and y.shape[1] == 1:
            y = y[:, 0]
        if y.ndim != 1:
            raise SchemaError("single-target model received a target matrix")
        if len(y) != X.shape[0]:
            raise SchemaError("X and y have different lengths")
        if y.dtype.kind not in "iub":
            if np.any(y != np.floor(y)):
                raise SchemaError("class labels must be integers")
            y = y.astype(np.int64)
        if self._n_classes is None:
            self._declare_classes(classes, y)
        if len(y) == 0:
            return self
        if y.min() < 0 or y.max() >= self._n_classes:
            bad = int(y[(y < 0) | (y >= self._n_classes)][0])
            raise UndeclaredClassError(f"class {bad} was not declared on the first partial_fit")
        if self._n_features is None:
            self._n_features = X.shape[1]
            self._setup()
        if sample_weight is None:
            for i in range(len(y)):
                self._learn_one(X[i], int(y[i]), 1.0)
            return self
        sample_weight = np.asarray(sample_weight, dtype=float)
        if sample_weight.shape != y.shape or np.any(sample_weight < 0):
            raise SchemaError("sample_weight must be non-negative with one entry per row")
        for i in range(len(y)):
            if sample_weight[i] > 0:
                self._learn_one(X[i], int(y[i]), float(sample_weight[i]))
        return self

    def predict_proba(self, X) -> np.ndarray:
        X = self._check_X(X)
        out = np.empty((X.shape[0], self.n_classes))
        for i in range(X.shape[0]):
            p = self._proba_one(X[i]) if self.is_trained else None
            out[i] = normalize(p, self.n_classes)
        return out

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.predict_proba(X), axis=1)

    def _setup(self):
        """Allocate model state once feature and class counts are known."""

    def _learn_one(self, x, y, w):
        raise NotImplementedError

    def _proba_one(self, x):
        raise NotImplementedError


def normalize(p, n_classes: int) -> np.ndarray:
    """Normalize ``p`` to sum to one; ``None`` or an all-zero vector becomes uniform."""
    if p is None:
        return np.full(n_classes, 1.0 / n_classes)
    p = np.asarray(p, dtype=float)
    total = p.sum()
    if not total > 0 or not np.isfinite(total):
        return np.full(n_classes, 1.0 / n_classes)
    return p / total


class DriftDetector(BaseEstimator):
    """Scalar change detector.

    ``update`` consumes one value and returns the :class:`DetectionStatus`
    for that step. ``reset`` restores the freshly constructed state while
    keeping parameters.
    """

    def __init__(self):
        self.reset()

    def reset(self):
        self._status = DetectionStatus.NORMAL
        self._reset_state()
        return self

    def _reset_state(self):
        raise NotImplementedError

    def update(self, value) -> DetectionStatus:
        raise NotImplementedError

    @property
    def in_drift(self) -> bool:
        return self._status is DetectionStatus.DRIFT

    @property
    def in_warning(self) -> bool:
        return self._status is DetectionStatus.WARNING

    @property
    def status(self) -> DetectionStatus:
        return self._status


def check_binary(value) -> int:
    if value not in (0, 1, True, False):
        raise ValueError(f"expected a 0/1 error indicator, got {value!r}")
    return int(value)


__all__ = [
    "BaseEstimator", "Classifier", "ConfigError", "DetectionStatus", "DriftDetector",
    "Instance", "ParseError", "SchemaError", "Stream", "StreamLearnError", "StreamModel",
    "StreamSchema", "UndeclaredClassError", "instances_to_arrays", "normalize",
]
