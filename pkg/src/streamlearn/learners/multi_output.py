"""Binary-relevance wrapper for multi-target streams."""

import numpy as np

from ..core import SchemaError, StreamModel
from .hoeffding_tree import HoeffdingTreeClassifier


class MultiOutputLearner(StreamModel):
    """One independent copy of ``base_estimator`` per target.

    ``partial_fit`` routes column ``j`` of ``Y`` to model ``j``; ``predict``
    returns an (n, n_targets) array and ``predict_proba`` a list with one
    (n, K_j) array per target. ``classes`` may be one list shared by all
    targets or one list per target.
    """

    def __init__(self, base_estimator=None, n_targets=None):
        self.base_estimator = base_estimator if base_estimator is not None \
            else HoeffdingTreeClassifier()
        self.n_targets = n_targets
        self.reset()

    def reset(self):
        self.models = None
        self._n_targets = self.n_targets
        if self._n_targets is not None:
            self.models = [self.base_estimator.clone() for _ in range(self._n_targets)]
        return self

    def _check_Y(self, Y):
        Y = np.asarray(Y)
        if Y.ndim == 1:
            Y = Y.reshape(-1, 1)
        if Y.ndim != 2:
            raise SchemaError("Y must be (n, n_targets)")
        if self._n_targets is None:
            self._n_targets = Y.shape[1]
            self.models = [self.base_estimator.clone() for _ in range(self._n_targets)]
        if Y.shape[1] != self._n_targets:
            raise SchemaError(f"expected {self._n_targets} targets, got {Y.shape[1]}")
        return Y

    def _target_classes(self, classes, j):
        if classes is None:
            return None
        classes = list(classes)
        if classes and isinstance(classes[0], (list, tuple, range, np.ndarray)):
            if len(classes) != self._n_targets:
                raise SchemaError("need one class list per target")
            return classes[j]
        return classes

    def partial_fit(self, X, Y, classes=None, sample_weight=None):
        Y = self._check_Y(Y)
        for j, model in enumerate(self.models):
            model.partial_fit(X, Y[:, j], classes=self._target_classes(classes, j),
                              sample_weight=sample_weight)
        return self

    def predict_proba(self, X):
        if self.models is None:
            raise SchemaError("number of targets unknown before the first partial_fit")
        return [m.predict_proba(X) for m in self.models]

    def predict(self, X):
        if self.models is None:
            raise SchemaError("number of targets unknown before the first partial_fit")
        return np.column_stack([m.predict(X) for m in self.models])
