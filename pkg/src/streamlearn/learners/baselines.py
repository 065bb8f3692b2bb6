"""Reference learners used as baselines and in protocol tests."""

import numpy as np

from ..core import Classifier


class MajorityClassClassifier(Classifier):
    """Predicts class frequencies seen so far."""

    def __init__(self):
        self.reset()

    def _reset_model(self):
        self._counts = None

    def _setup(self):
        self._counts = np.zeros(self.n_classes)

    @property
    def class_counts(self) -> dict:
        if self._counts is None:
            return {}
        return {c: float(n) for c, n in enumerate(self._counts) if n > 0}

    def _learn_one(self, x, y, w):
        self._counts[y] += w

    def _proba_one(self, x):
        return self._counts


class NoChangeClassifier(Classifier):
    """Predicts the most recent label it was trained on."""

    def __init__(self):
        self.reset()

    def _reset_model(self):
        self._last = None

    def _learn_one(self, x, y, w):
        self._last = y

    def _proba_one(self, x):
        p = np.zeros(self.n_classes)
        p[self._last] = 1.0
        return p
