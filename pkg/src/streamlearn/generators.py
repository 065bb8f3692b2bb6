"""Seeded synthetic streams and file/array-backed streams."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import Instance, ParseError, SchemaError, Stream, StreamSchema


class SEAGenerator(Stream):
    """SEA concepts: three uniform features on [0, 10], label from the first two.

    The clean label is 1 when ``a1 + a2 <= threshold`` and 0 otherwise; the
    fourth concept variant sets the threshold to 9.5. With ``noise_fraction``
    > 0 each label is flipped independently with that probability.
    ``last_clean_labels`` holds the pre-noise labels of the most recent
    ``next_sample`` call.
    """

    THRESHOLDS = (8.0, 9.0, 7.0, 9.5)

    def __init__(self, variant=0, noise_fraction=0.0, seed=1):
        super().__init__()
        if variant not in range(4):
            raise ValueError("variant must be 0, 1, 2 or 3")
        if not 0.0 <= noise_fraction < 1.0:
            raise ValueError("noise_fraction must lie in [0, 1)")
        self.variant = variant
        self.noise_fraction = noise_fraction
        self.seed = seed
        self.schema = StreamSchema(3, 1, (2,), feature_names=("a1", "a2", "a3"))
        self._reset_state()

    @property
    def threshold(self) -> float:
        return self.THRESHOLDS[self.variant]

    @classmethod
    def classify(cls, features, variant=0) -> int:
        return int(features[0] + features[1] <= cls.THRESHOLDS[variant])

    def _reset_state(self):
        self._rng = np.random.default_rng(self.seed)
        self.last_clean_labels = []

    def next_sample(self, n=1):
        self.last_clean_labels = []
        return super().next_sample(n)

    def _next_instance(self):
        x = self._rng.uniform(0.0, 10.0, 3)
        clean = int(x[0] + x[1] <= self.threshold)
        label = clean
        if self._rng.random() < self.noise_fraction:
            label = 1 - clean
        self.last_clean_labels.append(clean)
        return Instance(x, np.array([label]))


@dataclass
class Centroid:
    centre: np.ndarray
    class_label: int
    std: float
    weight: float


class RandomRBFGenerator(Stream):
    """Radial-basis-function concept with optionally moving centroids.

    Centroid geometry comes from ``seed_model`` (centres uniform on the unit
    hypercube, std uniform on [0, 0.1], positive weights, random class);
    instance draws come from ``seed_sample``. Each instance picks a centroid
    with probability proportional to its weight and offsets the centre along
    a uniformly random direction by a Gaussian(0, std) magnitude.

    With ``drift_speed > 0`` every centroid moves ``drift_speed`` along its
    own unit direction after each instance, reflecting off the faces of the
    unit hypercube.

    ``centroids`` overrides the random geometry with explicit
    :class:`Centroid` objects.
    """

    def __init__(self, n_classes=2, n_features=10, n_centroids=50, drift_speed=0.0,
                 seed_model=1, seed_sample=1, centroids: Optional[Sequence[Centroid]] = None):
        super().__init__()
        if n_centroids < 1 and centroids is None:
            raise ValueError("need at least one centroid")
        if drift_speed < 0:
            raise ValueError("drift_speed must be non-negative")
        self.n_classes = n_classes
        self.n_features = n_features
        self.n_centroids = n_centroids
        self.drift_speed = drift_speed
        self.seed_model = seed_model
        self.seed_sample = seed_sample
        self.centroids = centroids
        self.schema = StreamSchema(n_features, 1, (n_classes,))
        self._reset_state()

    def _build_model(self):
        rng = np.random.default_rng(self.seed_model)
        if self.centroids is not None:
            cents = list(self.centroids)
        else:
            cents = []
            for _ in range(self.n_centroids):
                centre = rng.random(self.n_features)
                label = int(rng.integers(self.n_classes))
                std = rng.uniform(0.0, 0.1)
                weight = 1.0 - rng.random()
                cents.append(Centroid(centre, label, std, weight))
        for c in cents:
            if c.weight <= 0:
                raise ValueError("centroid weights must be positive")
            if not 0 <= c.class_label < self.n_classes:
                raise ValueError("centroid class outside [0, n_classes)")
        self._centres = np.array([np.asarray(c.centre, dtype=float) for c in cents])
        if self._centres.shape[1] != self.n_features:
            raise ValueError("centroid dimension does not match n_features")
        self._labels = np.array([c.class_label for c in cents])
        self._stds = np.array([c.std for c in cents], dtype=float)
        self._cum_weights = np.cumsum([c.weight for c in cents])
        dirs = rng.standard_normal((len(cents), self.n_features))
        self._directions = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)

    def _reset_state(self):
        self._build_model()
        self._rng = np.random.default_rng(self.seed_sample)
        self.last_centroid = -1

    def centroid_positions(self) -> np.ndarray:
        return self._centres.copy()

    def class_prior(self) -> np.ndarray:
        """Exact class probabilities implied by the centroid weights."""
        w = np.diff(self._cum_weights, prepend=0.0)
        return np.bincount(self._labels, weights=w, minlength=self.n_classes) / w.sum()

    def _next_instance(self):
        rng = self._rng
        u = rng.random() * self._cum_weights[-1]
        idx = int(np.searchsorted(self._cum_weights, u, side="right"))
        idx = min(idx, len(self._cum_weights) - 1)
        direction = rng.standard_normal(self.n_features)
        norm = np.linalg.norm(direction)
        if norm > 0:
            direction /= norm
        magnitude = rng.normal(0.0, self._stds[idx])
        x = self._centres[idx] + direction * magnitude
        self.last_centroid = idx
        if self.drift_speed > 0:
            self._move_centroids()
        return Instance(x, np.array([self._labels[idx]]))

    def _move_centroids(self):
        c = self._centres + self.drift_speed * self._directions
        low, high = c < 0.0, c > 1.0
        c[low] = -c[low]
        c[high] = 2.0 - c[high]
        self._directions[low | high] *= -1.0
        self._centres = c


# Base waves of the CART-literature waveform task (Breiman et al., 1984),
# sampled at positions 1..21: h1 peaks at 11, h2 at 15, h3 at 7.
WAVE_H1 = np.array([0, 0, 0, 0, 0, 1, 2, 3, 4, 5, 6, 5, 4, 3, 2, 1, 0, 0, 0, 0, 0], dtype=float)
WAVE_H2 = np.array([0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 2, 3, 4, 5, 6, 5, 4, 3, 2, 1, 0], dtype=float)
WAVE_H3 = np.array([0, 1, 2, 3, 4, 5, 6, 5, 4, 3, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0], dtype=float)
WAVE_PAIRS = ((WAVE_H1, WAVE_H2), (WAVE_H1, WAVE_H3), (WAVE_H2, WAVE_H3))


class WaveformGenerator(Stream):
    """Three-class waveform task with 21 noisy attributes.

    Class ``c`` draws ``u ~ U[0, 1]`` and emits ``u * h_a + (1 - u) * h_b``
    for its pair ``(h_a, h_b)`` in ``WAVE_PAIRS``, plus Gaussian noise of
    standard deviation ``noise_sigma`` on every attribute.
    """

    def __init__(self, noise_sigma=1.0, seed=1):
        super().__init__()
        if noise_sigma < 0:
            raise ValueError("noise_sigma must be non-negative")
        self.noise_sigma = noise_sigma
        self.seed = seed
        self.schema = StreamSchema(21, 1, (3,))
        self._reset_state()

    def _reset_state(self):
        self._rng = np.random.default_rng(self.seed)

    def _mixing_weight(self) -> float:
        return self._rng.random()

    def _next_instance(self):
        c = int(self._rng.integers(3))
        u = self._mixing_weight()
        ha, hb = WAVE_PAIRS[c]
        x = u * ha + (1.0 - u) * hb + self._rng.normal(0.0, self.noise_sigma, 21)
        return Instance(x, np.array([c]))


class MultiLabelGenerator(Stream):
    """Multi-label stream from per-label hyperplanes through the origin.

    ``x`` is uniform on [-1, 1]^d and label ``l`` is 1 iff ``w_l . x > 0``
    with ``w_l = dep * w_shared + (1 - dep) * w_private_l``; all weight
    vectors are unit vectors drawn once from the seed. ``label_dependence``
    of 1 makes every label identical.

    The shared and private vectors are drawn as a random orthonormal frame
    (Gram-Schmidt on Gaussian draws), so with ``label_dependence`` 0 the
    labels come from mutually orthogonal hyperplanes. Each vector is still
    uniform on the sphere. Vectors beyond the feature count are drawn
    independently.
    """

    def __init__(self, n_features=10, n_labels=5, label_dependence=0.5, seed=1):
        super().__init__()
        if n_labels < 2:
            raise ValueError("n_labels must be at least 2")
        if not 0.0 <= label_dependence <= 1.0:
            raise ValueError("label_dependence must lie in [0, 1]")
        self.n_features = n_features
        self.n_labels = n_labels
        self.label_dependence = label_dependence
        self.seed = seed
        self.schema = StreamSchema(n_features, n_labels, (2,) * n_labels)
        self._reset_state()

    def _reset_state(self):
        rng = np.random.default_rng(self.seed)
        vecs = rng.standard_normal((self.n_labels + 1, self.n_features))
        k = min(len(vecs), self.n_features)
        q, r = np.linalg.qr(vecs[:k].T)
        vecs[:k] = (q * np.sign(np.diag(r))).T
        vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
        dep = self.label_dependence
        self.weights = dep * vecs[0] + (1.0 - dep) * vecs[1:]
        self._rng = rng

    def _next_instance(self):
        x = self._rng.uniform(-1.0, 1.0, self.n_features)
        return Instance(x, (self.weights @ x > 0).astype(np.int64))


class CSVStream(Stream):
    """Stream over a numeric CSV file.

    The rightmost ``n_target_columns`` columns are integer targets. The file
    is scanned once at construction to validate every row and infer the
    schema; rows are then read lazily. Errors carry the 1-based data row
    number.
    """

    def __init__(self, path, n_target_columns=1, header=True, target_cardinality=None):
        super().__init__()
        if n_target_columns < 1:
            raise ValueError("n_target_columns must be positive")
        self.path = str(path)
        self.n_target_columns = n_target_columns
        self.header = header
        self.target_cardinality = target_cardinality
        self._fh = None
        names, n_rows, max_targets, n_cols = self._scan()
        if n_cols is None:
            if names is None:
                raise ParseError("file has no header and no data", 1)
            n_cols = len(names)
        n_features = n_cols - n_target_columns
        if n_features < 1:
            raise ParseError("need at least one feature column", 1)
        if target_cardinality is None:
            card = tuple(max(2, int(m) + 1) for m in max_targets) if max_targets is not None \
                else (2,) * n_target_columns
        else:
            card = tuple(target_cardinality)
        self._n_rows = n_rows
        self.schema = StreamSchema(
            n_features, n_target_columns, card,
            feature_names=tuple(names[:n_features]) if names else (),
            target_names=tuple(names[n_features:]) if names else ())
        self._reset_state()

    def _rows(self, fh):
        reader = csv.reader(fh)
        if self.header:
            names = next(reader, None)
            yield names
        row_no = 0
        for cells in reader:
            if not cells or all(not c.strip() for c in cells):
                continue
            row_no += 1
            yield row_no, cells

    def _parse(self, row_no, cells, n_cols):
        if n_cols is not None and len(cells) != n_cols:
            raise ParseError(f"expected {n_cols} cells, got {len(cells)}", row_no)
        if len(cells) <= self.n_target_columns:
            raise ParseError("row has no feature cells", row_no)
        try:
            values = [float(c) for c in cells]
        except ValueError as exc:
            raise ParseError(f"non-numeric cell ({exc})", row_no) from None
        if not all(math.isfinite(v) for v in values):
            raise ParseError("non-finite cell", row_no)
        split = len(values) - self.n_target_columns
        targets = values[split:]
        if any(t != int(t) or t < 0 for t in targets):
            raise ParseError("targets must be non-negative integers", row_no)
        return (np.array(values[:split], dtype=float),
                np.array([int(t) for t in targets], dtype=np.int64))

    def _scan(self):
        names, n_cols, max_targets, n_rows = None, None, None, 0
        with open(self.path, newline="", encoding="utf-8") as fh:
            rows = self._rows(fh)
            if self.header:
                names = next(rows)
                if names is not None:
                    n_cols = len(names)
            for row_no, cells in rows:
                _, t = self._parse(row_no, cells, n_cols)
                n_cols = len(cells)
                max_targets = t if max_targets is None else np.maximum(max_targets, t)
                n_rows += 1
        return names, n_rows, max_targets, n_cols

    def _reset_state(self):
        if self._fh is not None:
            self._fh.close()
        self._fh = open(self.path, newline="", encoding="utf-8")
        self._iter = self._rows(self._fh)
        if self.header:
            next(self._iter)

    def n_remaining_samples(self):
        return self._n_rows - self._serial

    def _next_instance(self):
        item = next(self._iter, None)
        if item is None:
            return None
        row_no, cells = item
        x, t = self._parse(row_no, cells, self.schema.n_features + self.schema.n_targets)
        if np.any(t >= np.array(self.schema.target_cardinality)):
            raise ParseError("target exceeds declared cardinality", row_no)
        return Instance(x, t)

    def close(self):
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def __del__(self):
        self.close()


class DataStream(Stream):
    """Finite stream over in-memory arrays; ``y`` is (n,) or (n, n_targets)."""

    def __init__(self, X, y, target_cardinality=None):
        super().__init__()
        X = np.asarray(X, dtype=float)
        y = np.asarray(y)
        if y.ndim == 1:
            y = y.reshape(-1, 1)
        if X.ndim != 2 or y.ndim != 2 or X.shape[0] != y.shape[0]:
            raise SchemaError("X must be (n, d) and y (n,) or (n, L) with matching n")
        self.X = X
        self.y = y.astype(np.int64)
        if target_cardinality is None:
            target_cardinality = tuple(max(2, int(m) + 1) for m in self.y.max(axis=0)) \
                if len(self.y) else (2,) * y.shape[1]
        self.target_cardinality = target_cardinality
        self.schema = StreamSchema(X.shape[1], y.shape[1], tuple(target_cardinality))
        self._reset_state()

    def _reset_state(self):
        self._pos = 0

    def n_remaining_samples(self):
        return len(self.X) - self._pos

    def _next_instance(self):
        if self._pos >= len(self.X):
            return None
        i = self._pos
        self._pos += 1
        return Instance(self.X[i].copy(), self.y[i].copy())


class ConceptDriftStream(Stream):
    """Abrupt concept switch: ``stream`` for ``position`` instances, then ``drift_stream``."""

    def __init__(self, stream: Stream, drift_stream: Stream, position=5000):
        super().__init__()
        a, b = stream.schema, drift_stream.schema
        if (a.n_features, a.n_targets) != (b.n_features, b.n_targets):
            raise SchemaError("both concepts must share feature and target counts")
        self.stream = stream
        self.drift_stream = drift_stream
        self.position = position
        card = tuple(max(p, q) for p, q in zip(a.target_cardinality, b.target_cardinality))
        self.schema = StreamSchema(a.n_features, a.n_targets, card,
                                   feature_names=a.feature_names, target_names=a.target_names)
        self._reset_state()

    def _reset_state(self):
        self.stream.restart()
        self.drift_stream.restart()

    def n_remaining_samples(self):
        first = self.stream.n_remaining_samples()
        second = self.drift_stream.n_remaining_samples()
        if first is None or second is None:
            return None
        return max(0, self.position - self._serial) + second

    def _next_instance(self):
        source = self.stream if self._serial < self.position else self.drift_stream
        batch = source.next_sample(1)
        return batch[0] if batch else None


GENERATORS = {
    "sea": SEAGenerator,
    "rbf": RandomRBFGenerator,
    "rbf_drift": RandomRBFGenerator,
    "waveform": WaveformGenerator,
    "multilabel": MultiLabelGenerator,
}

# parameters that differ from the class defaults for a registry alias
GENERATOR_DEFAULTS = {
    "rbf_drift": {"drift_speed": 0.001},
}
