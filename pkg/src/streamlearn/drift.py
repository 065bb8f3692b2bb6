"""Concept-drift detectors consuming one scalar per step.

All detectors here expect the monitored value to rise on degradation:
models feed them a 0/1 error indicator (1 = misclassified).
"""

from __future__ import annotations

import math
from collections import deque

from .core import DetectionStatus, DriftDetector, check_binary


class ADWIN(DriftDetector):
    """Adaptive windowing over values in [0, 1].

    The window is stored as an exponential histogram: row ``r`` holds up to
    ``max_buckets`` buckets summarising ``2**r`` consecutive values each.
    After every insertion each bucket boundary splits the window into an
    older part W0 and a newer part W1, and the oldest bucket is dropped while
    some split satisfies ``|mean(W0) - mean(W1)| >= eps_cut`` with::

        eps_cut = sqrt(ln(4 / delta') / (2 m)),   m = 1 / (1/n0 + 1/n1)

    where ``delta' = delta / n`` and ``n`` is the current window width, which
    accounts for the many splits tested per step.

    Parameters
    ----------
    delta : float
        Confidence of the cut test, in (0, 1).
    max_buckets : int
        Buckets kept per row before the two oldest are merged upward.
    """

    def __init__(self, delta=0.002, max_buckets=5):
        if not 0 < delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if max_buckets < 1:
            raise ValueError("max_buckets must be positive")
        self.delta = delta
        self.max_buckets = max_buckets
        super().__init__()

    def _reset_state(self):
        # rows[r] holds bucket sums, oldest on the left
        self._rows = []
        self._width = 0
        self._total = 0.0
        self.n_detections = 0

    @property
    def width(self) -> int:
        """Number of values currently retained."""
        return self._width

    @property
    def total(self) -> float:
        return self._total

    @property
    def estimation(self) -> float:
        """Mean of the retained window (0 when empty)."""
        return self._total / self._width if self._width else 0.0

    def buckets(self):
        """``(sum, count)`` of every bucket, oldest first."""
        out = []
        for r in range(len(self._rows) - 1, -1, -1):
            size = 1 << r
            out.extend((s, size) for s in self._rows[r])
        return out

    def update(self, value) -> DetectionStatus:
        value = float(value)
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"ADWIN input must lie in [0, 1], got {value!r}")
        self._insert(value)
        drifted = False
        while self._cut_found():
            self._drop_oldest()
            drifted = True
        if drifted:
            self.n_detections += 1
            self._status = DetectionStatus.DRIFT
        else:
            self._status = DetectionStatus.NORMAL
        return self._status

    def _insert(self, value):
        rows = self._rows
        if not rows:
            rows.append(deque())
        rows[0].append(value)
        self._width += 1
        self._total += value
        r = 0
        while len(rows[r]) > self.max_buckets:
            merged = rows[r].popleft() + rows[r].popleft()
            if r + 1 == len(rows):
                rows.append(deque())
            rows[r + 1].append(merged)
            r += 1

    def _cut_found(self) -> bool:
        width, total = self._width, self._total
        if width < 2:
            return False
        log_term = math.log(4.0 * width / self.delta)
        n0, s0 = 0, 0.0
        for r in range(len(self._rows) - 1, -1, -1):
            size = 1 << r
            for s in self._rows[r]:
                n0 += size
                s0 += s
                n1 = width - n0
                if n1 == 0:
                    return False
                m = 1.0 / (1.0 / n0 + 1.0 / n1)
                eps = math.sqrt(log_term / (2.0 * m))
                if abs(s0 / n0 - (total - s0) / n1) >= eps:
                    return True
        return False

    def _drop_oldest(self):
        rows = self._rows
        r = len(rows) - 1
        s = rows[r].popleft()
        self._width -= 1 << r
        self._total -= s
        while rows and not rows[-1]:
            rows.pop()
        if not self._width:
            self._total = 0.0


class DDM(DriftDetector):
    """Drift detection method over the running error rate.

    With ``p`` the error rate after ``i`` samples and ``s = sqrt(p(1-p)/i)``,
    the detector remembers the pair minimising ``p + s`` and signals a
    warning at ``p + s >= p_min + 2 s_min`` and a drift (followed by a full
    reset) at ``p + s >= p_min + 3 s_min``. The minimum is only recorded
    while ``s > 0``, so a perfect (or always-wrong) prefix cannot pin a
    zero-width reference.
    """

    def __init__(self, min_num_instances=30, warning_level=2.0, out_control_level=3.0):
        self.min_num_instances = min_num_instances
        self.warning_level = warning_level
        self.out_control_level = out_control_level
        super().__init__()

    def _reset_state(self):
        self.n = 0
        self.n_errors = 0
        self.p = 0.0
        self.s = 0.0
        self.p_min = math.inf
        self.s_min = math.inf

    def update(self, value) -> DetectionStatus:
        err = check_binary(value)
        self.n += 1
        self.n_errors += err
        self.p = self.n_errors / self.n
        self.s = math.sqrt(self.p * (1.0 - self.p) / self.n)
        status = DetectionStatus.NORMAL
        if self.n >= self.min_num_instances:
            level = self.p + self.s
            if self.s > 0 and level < self.p_min + self.s_min:
                self.p_min, self.s_min = self.p, self.s
            if self.p_min < math.inf:
                if level >= self.p_min + self.out_control_level * self.s_min:
                    status = DetectionStatus.DRIFT
                elif level >= self.p_min + self.warning_level * self.s_min:
                    status = DetectionStatus.WARNING
        if status is DetectionStatus.DRIFT:
            self._reset_state()
        self._status = status
        return status


class EDDM(DriftDetector):
    """Early drift detection from the spacing between errors.

    Distances (in elements) between consecutive errors are tracked with a
    running mean and standard deviation; the first error only anchors the
    count. Once ``min_num_errors`` errors have been seen, the ratio
    ``(mean + 2 std) / max(mean + 2 std)`` is compared against ``alpha``
    (warning) and ``beta`` (drift, then reset). Non-error steps leave the
    status untouched except that a drift never persists past its own step.
    """

    def __init__(self, alpha=0.95, beta=0.9, min_num_errors=30):
        if not 0 < beta <= alpha <= 1:
            raise ValueError("need 0 < beta <= alpha <= 1")
        self.alpha = alpha
        self.beta = beta
        self.min_num_errors = min_num_errors
        super().__init__()

    def _reset_state(self):
        self.n = 0
        self.n_errors = 0
        self._last_error = None
        self._n_dist = 0
        self.mean = 0.0
        self._m2 = 0.0
        self.max_level = 0.0
        self.mean_max = 0.0
        self.std_max = 0.0

    @property
    def std(self) -> float:
        return math.sqrt(self._m2 / self._n_dist) if self._n_dist else 0.0

    def update(self, value) -> DetectionStatus:
        err = check_binary(value)
        self.n += 1
        if self._status is DetectionStatus.DRIFT:
            self._status = DetectionStatus.NORMAL
        if not err:
            return self._status

        self.n_errors += 1
        if self._last_error is not None:
            dist = self.n - self._last_error
            self._n_dist += 1
            delta = dist - self.mean
            self.mean += delta / self._n_dist
            self._m2 += delta * (dist - self.mean)
        self._last_error = self.n

        if self.n_errors < self.min_num_errors or self._n_dist == 0:
            self._status = DetectionStatus.NORMAL
            return self._status
        level = self.mean + 2.0 * self.std
        if level > self.max_level:
            self.max_level = level
            self.mean_max, self.std_max = self.mean, self.std
        ratio = level / self.max_level if self.max_level > 0 else 1.0
        if ratio < self.beta:
            self._reset_state()
            self._status = DetectionStatus.DRIFT
        elif ratio < self.alpha:
            self._status = DetectionStatus.WARNING
        else:
            self._status = DetectionStatus.NORMAL
        return self._status


class PageHinkley(DriftDetector):
    """One-sided Page-Hinkley test for an increase of the mean.

    Keeps ``m_T = sum(x_t - mean_t - delta)`` and its running minimum
    ``M_T``; signals drift when ``m_T - M_T > threshold`` after
    ``min_num_instances`` values, then resets.
    """

    def __init__(self, delta=0.005, threshold=50.0, min_num_instances=30):
        self.delta = delta
        self.threshold = threshold
        self.min_num_instances = min_num_instances
        super().__init__()

    def _reset_state(self):
        self.n = 0
        self.mean = 0.0
        self.cumulative = 0.0
        self.minimum = math.inf

    def update(self, value) -> DetectionStatus:
        x = float(value)
        if not math.isfinite(x):
            raise ValueError(f"Page-Hinkley input must be finite, got {value!r}")
        self.n += 1
        self.mean += (x - self.mean) / self.n
        self.cumulative += x - self.mean - self.delta
        if self.cumulative < self.minimum:
            self.minimum = self.cumulative
        if self.n >= self.min_num_instances and self.cumulative - self.minimum > self.threshold:
            self._reset_state()
            self._status = DetectionStatus.DRIFT
        else:
            self._status = DetectionStatus.NORMAL
        return self._status


DETECTORS = {
    "adwin": ADWIN,
    "ddm": DDM,
    "eddm": EDDM,
    "page_hinkley": PageHinkley,
}
