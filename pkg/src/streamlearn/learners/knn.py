"""Sliding-window k-nearest-neighbours, with an ADWIN-driven window variant."""

import numpy as np

from ..core import Classifier, DetectionStatus
from ..drift import ADWIN


class WindowBuffer:
    """FIFO ring of (features, label) pairs holding at most ``max_size`` items."""

    def __init__(self, max_size, n_features):
        if max_size < 1:
            raise ValueError("max_size must be positive")
        self.max_size = max_size
        self._X = np.empty((max_size, n_features))
        self._y = np.empty(max_size, dtype=np.int64)
        self._start = 0
        self._size = 0

    def __len__(self):
        return self._size

    def append(self, x, y):
        pos = (self._start + self._size) % self.max_size
        self._X[pos] = x
        self._y[pos] = y
        if self._size < self.max_size:
            self._size += 1
        else:
            self._start = (self._start + 1) % self.max_size

    def shrink(self, width):
        """Keep only the ``width`` most recent items."""
        if width < self._size:
            drop = self._size - max(width, 0)
            self._start = (self._start + drop) % self.max_size
            self._size -= drop

    def ordered(self):
        """Stored items oldest first."""
        idx = (self._start + np.arange(self._size)) % self.max_size
        return self._X[idx], self._y[idx]

    def nearest(self, x, k):
        """Labels of the ``k`` items closest to ``x``; equal distances favour older items."""
        n = self._size
        X, y = self._X[:n], self._y[:n]
        if n <= k:
            return y.copy()
        diff = X - x
        dist = np.einsum("ij,ij->i", diff, diff)
        kth = np.partition(dist, k - 1)[k - 1]
        inside = np.flatnonzero(dist < kth)
        ties = np.flatnonzero(dist == kth)
        need = k - len(inside)
        if len(ties) > need:
            age = (ties - self._start) % self.max_size
            ties = ties[np.argsort(age, kind="stable")[:need]]
        return y[np.concatenate((inside, ties))]


class KNNClassifier(Classifier):
    """k-NN over the last ``max_window_size`` training instances.

    Distances are Euclidean on raw features. Equidistant neighbours are
    ranked oldest first, and with fewer than ``n_neighbors`` stored points
    all of them vote.
    """

    def __init__(self, n_neighbors=5, max_window_size=1000):
        if n_neighbors < 1:
            raise ValueError("n_neighbors must be positive")
        self.n_neighbors = n_neighbors
        self.max_window_size = max_window_size
        self.reset()

    def _reset_model(self):
        self.window = None

    def _setup(self):
        self.window = WindowBuffer(self.max_window_size, self._n_features)

    def _learn_one(self, x, y, w):
        self.window.append(x, y)

    def _proba_one(self, x):
        if not len(self.window):
            return None
        labels = self.window.nearest(x, self.n_neighbors)
        return np.bincount(labels, minlength=self.n_classes).astype(float)


class KNNADWINClassifier(KNNClassifier):
    """k-NN whose window is cut back to ADWIN's width on drift.

    Before storing each training instance, the error indicator of the
    current prediction for it is fed to ADWIN; on drift the window keeps only
    the ``adwin.width`` most recent items.
    """

    def __init__(self, n_neighbors=5, max_window_size=1000, delta=0.002):
        self.delta = delta
        super().__init__(n_neighbors=n_neighbors, max_window_size=max_window_size)

    def _reset_model(self):
        super()._reset_model()
        self.adwin = ADWIN(delta=self.delta)

    def _learn_one(self, x, y, w):
        proba = self._proba_one(x)
        pred = 0 if proba is None else int(np.argmax(proba))
        if self.adwin.update(int(pred != y)) is DetectionStatus.DRIFT:
            self.window.shrink(self.adwin.width)
        self.window.append(x, y)
