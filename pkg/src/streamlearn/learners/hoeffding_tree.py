"""Hoeffding tree (VFDT) for dense numeric features."""

from __future__ import annotations

import math

import numpy as np

from ..core import Classifier
from .naive_bayes import gaussian_log_joint, softmax_log


def hoeffding_bound(range_val, confidence, n):
    """Radius ``sqrt(R^2 ln(1/delta) / (2n))`` around the mean of ``n`` draws.

    ``confidence`` of exactly 1 gives 0.
    """
    if range_val <= 0:
        raise ValueError("range must be positive")
    if not 0 < confidence <= 1:
        raise ValueError("confidence must lie in (0, 1]")
    if n <= 0:
        raise ValueError("n must be positive")
    return math.sqrt(range_val * range_val * math.log(1.0 / confidence) / (2.0 * n))


def entropy(dist) -> float:
    total = sum(dist)
    if total <= 0:
        return 0.0
    h = 0.0
    for v in dist:
        if v > 0:
            p = v / total
            h -= p * math.log2(p)
    return h


class LeafStats:
    """Class counts plus per-class, per-feature Gaussian summaries."""

    __slots__ = ("counts", "means", "m2", "lo", "hi")

    def __init__(self, n_classes, n_features):
        self.counts = np.zeros(n_classes)
        self.means = np.zeros((n_classes, n_features))
        self.m2 = np.zeros((n_classes, n_features))
        self.lo = np.full((n_classes, n_features), np.inf)
        self.hi = np.full((n_classes, n_features), -np.inf)

    def update(self, x, y, w):
        self.counts[y] += w
        mean = self.means[y]
        delta = x - mean
        mean += w * delta / self.counts[y]
        self.m2[y] += w * delta * (x - mean)
        np.minimum(self.lo[y], x, out=self.lo[y])
        np.maximum(self.hi[y], x, out=self.hi[y])

    def snapshot(self) -> dict:
        return {k: getattr(self, k).copy() for k in self.__slots__}


def weight_below(count, mean, m2, lo, hi, threshold) -> float:
    """Estimated weight of one class's values ``<= threshold``."""
    if count <= 0 or threshold < lo:
        return 0.0
    if threshold >= hi:
        return count
    std = math.sqrt(m2 / count)
    if std == 0.0:
        return count if threshold >= mean else 0.0
    return count * 0.5 * (1.0 + math.erf((threshold - mean) / (std * math.sqrt(2.0))))


def candidate_thresholds(stats, feature, n_points):
    seen = stats.counts > 0
    lo = stats.lo[seen, feature].min()
    hi = stats.hi[seen, feature].max()
    if not hi > lo:
        return []
    step = (hi - lo) / (n_points + 1)
    return [lo + step * i for i in range(1, n_points + 1)]


def best_split_per_feature(stats, n_points):
    """Best (gain, threshold) for every feature; threshold is None without candidates.

    Gains are information gains (bits) of the binary split ``x <= t`` whose
    branch class distributions are estimated from the Gaussian summaries.
    Candidates are ``n_points`` evenly spaced values strictly inside the
    observed range; the lowest threshold wins ties.
    """
    counts = stats.counts
    total = counts.sum()
    parent = entropy(counts)
    n_classes, n_features = stats.means.shape
    out = []
    for f in range(n_features):
        best_gain, best_t = 0.0, None
        for t in candidate_thresholds(stats, f, n_points):
            left = [weight_below(counts[c], stats.means[c, f], stats.m2[c, f],
                                 stats.lo[c, f], stats.hi[c, f], t) for c in range(n_classes)]
            right = [counts[c] - left[c] for c in range(n_classes)]
            w_left = sum(left)
            gain = parent - (w_left / total) * entropy(left) \
                - ((total - w_left) / total) * entropy(right)
            if best_t is None or gain > best_gain:
                best_gain, best_t = gain, t
        out.append((best_gain, best_t))
    return out


class Leaf:
    __slots__ = ("stats", "since_attempt")

    def __init__(self, n_classes, n_features):
        self.stats = LeafStats(n_classes, n_features)
        self.since_attempt = 0.0

    @property
    def weight(self) -> float:
        return float(self.stats.counts.sum())


class Split:
    __slots__ = ("feature", "threshold", "left", "right")

    def __init__(self, feature, threshold, left, right):
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right


class HoeffdingTreeClassifier(Classifier):
    """Very fast decision tree over numeric features.

    Parameters
    ----------
    grace_period : int
        Training weight a leaf accumulates between split attempts.
    split_confidence : float
        ``delta`` of the Hoeffding bound.
    tie_threshold : float
        Split anyway once the bound falls below this value.
    n_split_points : int
        Candidate thresholds probed per feature.
    leaf_prediction : {'mc', 'nb'}
        Laplace-smoothed class counts, or Gaussian naive Bayes over the leaf
        summaries once the leaf holds ``nb_threshold`` weight.
    nb_threshold : float
        Minimum leaf weight before 'nb' prediction is used.
    record_split_attempts : bool
        Keep a copy of the statistics and outcome of every split attempt in
        ``split_log``.

    Notes
    -----
    A split needs a positive best gain and either
    ``best - second_best > eps`` or ``eps < tie_threshold`` with
    ``eps = hoeffding_bound(log2(n_classes), split_confidence, n_leaf)``.
    ``second_best`` is the best gain of the runner-up feature (0 with a single
    feature). New leaves start empty.
    """

    def __init__(self, grace_period=200, split_confidence=1e-7, tie_threshold=0.05,
                 n_split_points=10, leaf_prediction="mc", nb_threshold=0,
                 record_split_attempts=False):
        if leaf_prediction not in ("mc", "nb"):
            raise ValueError("leaf_prediction must be 'mc' or 'nb'")
        if grace_period < 1:
            raise ValueError("grace_period must be positive")
        self.grace_period = grace_period
        self.split_confidence = split_confidence
        self.tie_threshold = tie_threshold
        self.n_split_points = n_split_points
        self.leaf_prediction = leaf_prediction
        self.nb_threshold = nb_threshold
        self.record_split_attempts = record_split_attempts
        self.reset()

    def _reset_model(self):
        self._root = None
        self.n_split_nodes = 0
        self.n_split_attempts = 0
        self.split_log = []

    def _setup(self):
        self._root = self._new_leaf()

    def _new_leaf(self):
        return Leaf(self.n_classes, self._n_features)

    @property
    def n_leaves(self) -> int:
        return self.n_split_nodes + 1 if self._root is not None else 0

    @property
    def depth(self) -> int:
        def walk(node):
            if isinstance(node, Leaf):
                return 0
            return 1 + max(walk(node.left), walk(node.right))
        return walk(self._root) if self._root is not None else 0

    def leaves(self):
        out, stack = [], [self._root] if self._root is not None else []
        while stack:
            node = stack.pop()
            if isinstance(node, Leaf):
                out.append(node)
            else:
                stack.extend((node.right, node.left))
        return out

    def _route(self, x):
        parent, branch, node = None, None, self._root
        while isinstance(node, Split):
            parent = node
            if x[node.feature] <= node.threshold:
                branch, node = "left", node.left
            else:
                branch, node = "right", node.right
        return node, parent, branch

    def _learn_one(self, x, y, w):
        leaf, parent, branch = self._route(x)
        leaf.stats.update(x, y, w)
        leaf.since_attempt += w
        if leaf.since_attempt >= self.grace_period:
            leaf.since_attempt = 0.0
            decision = self._attempt_split(leaf)
            if decision is not None:
                node = Split(decision[0], decision[1], self._new_leaf(), self._new_leaf())
                if parent is None:
                    self._root = node
                else:
                    setattr(parent, branch, node)
                self.n_split_nodes += 1

    def _attempt_split(self, leaf):
        self.n_split_attempts += 1
        n = leaf.weight
        per_feature = best_split_per_feature(leaf.stats, self.n_split_points)
        ranking = sorted(range(len(per_feature)), key=lambda f: (-per_feature[f][0], f))
        best = ranking[0]
        g_best = per_feature[best][0]
        g_second = per_feature[ranking[1]][0] if len(ranking) > 1 else 0.0
        eps = hoeffding_bound(math.log2(self.n_classes), self.split_confidence, n)
        decision = None
        if g_best > 0 and (g_best - g_second > eps or eps < self.tie_threshold):
            decision = (best, per_feature[best][1])
        if self.record_split_attempts:
            self.split_log.append({
                "n": n, "eps": eps, "stats": leaf.stats.snapshot(),
                "gains": [g for g, _ in per_feature], "decision": decision,
            })
        return decision

    def _proba_one(self, x):
        leaf, _, _ = self._route(x)
        stats = leaf.stats
        if self.leaf_prediction == "nb" and leaf.weight > 0 and leaf.weight >= self.nb_threshold:
            return softmax_log(gaussian_log_joint(stats.counts, stats.means, stats.m2, x))
        return (stats.counts + 1.0) / (stats.counts.sum() + self.n_classes)
