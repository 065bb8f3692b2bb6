"""Gaussian naive Bayes with one-pass (Welford) per-class statistics."""

import math

import numpy as np

from ..core import Classifier

VAR_FLOOR = 1e-9


def gaussian_log_joint(counts, means, m2, x, var_floor=VAR_FLOOR):
    """Unnormalized log posterior per class; classes never seen get -inf.

    ``counts`` has shape (C,), ``means`` and ``m2`` shape (C, d).
    """
    log_p = np.full(len(counts), -np.inf)
    seen = counts > 0
    if not seen.any():
        return log_p
    c = counts[seen]
    var = m2[seen] / c[:, None] + var_floor
    ll = -0.5 * (np.log(2.0 * math.pi * var) + (x - means[seen]) ** 2 / var)
    log_p[seen] = np.log(c / counts.sum()) + ll.sum(axis=1)
    return log_p


def softmax_log(log_p):
    m = log_p.max()
    if not np.isfinite(m):
        return None
    p = np.exp(log_p - m)
    return p / p.sum()


class GaussianNaiveBayes(Classifier):
    """Naive Bayes over dense real features.

    Per class and feature, the running weight, mean and sum of squared
    deviations are kept; the likelihood is Gaussian with variance
    ``M2 / count + 1e-9``. Priors are the class frequencies, so a declared
    class with no data has posterior 0.
    """

    def __init__(self):
        self.reset()

    def _reset_model(self):
        self._counts = None

    def _setup(self):
        C, d = self.n_classes, self._n_features
        self._counts = np.zeros(C)
        self._means = np.zeros((C, d))
        self._m2 = np.zeros((C, d))

    def _learn_one(self, x, y, w):
        self._counts[y] += w
        delta = x - self._means[y]
        self._means[y] += w * delta / self._counts[y]
        self._m2[y] += w * delta * (x - self._means[y])

    def _proba_one(self, x):
        return softmax_log(gaussian_log_joint(self._counts, self._means, self._m2, x))
