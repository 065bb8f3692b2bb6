"""Online bagging ensembles (Oza bagging, leverage bagging)."""

import math

import numpy as np

from ..core import Classifier, DetectionStatus
from ..drift import ADWIN
from .hoeffding_tree import HoeffdingTreeClassifier


def poisson_inversion(rng, lam, max_k=10_000):
    """Poisson(lam) draw by inverting the CDF with a single uniform."""
    u = rng.random()
    k = 0
    p = math.exp(-lam)
    cdf = p
    while u > cdf and k < max_k:
        k += 1
        p *= lam / k
        cdf += p
    return k


class OzaBaggingClassifier(Classifier):
    """Online bagging: each member trains ``k ~ Poisson(lambda)`` times per instance.

    Member ``i`` draws from its own RNG substream (child ``i`` of
    ``SeedSequence(seed)``), so its draws do not depend on the ensemble
    size. Predictions average the members' distributions.
    """

    def __init__(self, base_estimator=None, n_estimators=10, poisson_lambda=1.0, seed=1):
        if n_estimators < 1:
            raise ValueError("n_estimators must be positive")
        self.base_estimator = base_estimator if base_estimator is not None \
            else HoeffdingTreeClassifier()
        self.n_estimators = n_estimators
        self.poisson_lambda = poisson_lambda
        self.seed = seed
        self.reset()

    def _reset_model(self):
        self.members = [self.base_estimator.clone() for _ in range(self.n_estimators)]
        children = np.random.SeedSequence(self.seed).spawn(self.n_estimators)
        self._rngs = [np.random.default_rng(c) for c in children]

    def _setup(self):
        for i in range(self.n_estimators):
            self._declare(self.members[i])

    def _declare(self, member):
        member.partial_fit(np.empty((0, self._n_features)), [], classes=self._classes())
        return member

    def _draw_k(self, i):
        return poisson_inversion(self._rngs[i], self.poisson_lambda)

    def _classes(self):
        return list(range(self.n_classes))

    def _train_member(self, i, x, y):
        k = self._draw_k(i)
        if k:
            X = x.reshape(1, -1)
            for _ in range(k):
                self.members[i].partial_fit(X, [y], classes=self._classes())

    def _learn_one(self, x, y, w):
        for i in range(self.n_estimators):
            self._train_member(i, x, y)

    def predict_proba(self, X):
        X = self._check_X(X)
        if not self.is_trained:
            return np.full((X.shape[0], self.n_classes), 1.0 / self.n_classes)
        total = self.members[0].predict_proba(X)
        for m in self.members[1:]:
            total = total + m.predict_proba(X)
        return total / self.n_estimators


class LeverageBaggingClassifier(OzaBaggingClassifier):
    """Online bagging with Poisson(6) weights and per-member ADWIN monitors.

    Each member's ADWIN is fed that member's error on the instance (predicted
    before training on it). When any monitor signals drift, the member whose
    ADWIN estimates the highest error (lowest index on ties) is replaced by a
    fresh model with a fresh monitor.
    """

    def __init__(self, base_estimator=None, n_estimators=10, poisson_lambda=6.0,
                 delta=0.002, detect_drift=True, seed=1):
        self.delta = delta
        self.detect_drift = detect_drift
        super().__init__(base_estimator=base_estimator, n_estimators=n_estimators,
                         poisson_lambda=poisson_lambda, seed=seed)

    def _reset_model(self):
        super()._reset_model()
        self.adwins = [ADWIN(delta=self.delta) for _ in range(self.n_estimators)]
        self.n_member_resets = 0

    def _learn_one(self, x, y, w):
        drifted = False
        X = x.reshape(1, -1)
        for i in range(self.n_estimators):
            if self.detect_drift:
                err = int(self.members[i].predict(X)[0] != y)
                if self.adwins[i].update(err) is DetectionStatus.DRIFT:
                    drifted = True
            self._train_member(i, x, y)
        if drifted:
            errors = [a.estimation for a in self.adwins]
            worst = int(np.argmax(errors))
            self.members[worst] = self._declare(self.base_estimator.clone())
            self.adwins[worst] = ADWIN(delta=self.delta)
            self.n_member_resets += 1
