"""Dubuc envelopes and the Multiscale Dubuc similarity / distance.

A series ``x`` of length ``d`` is wrapped, at scale ``eps``, by the band
between its sliding-window maximum and minimum over ``[t - eps, t + eps]``
(truncated at the series boundaries). Two series are compared by the
Jaccard-style ratio of the summed per-timestamp overlap of their bands to the
summed per-timestamp span. The multiscale similarity is the trapezoidal area
under that ratio curve over a set of scales, normalized by the scale range so
it lies in [0, 1]; the distance is one minus the similarity.

All hot loops are numba kernels that sum left-to-right over ``t`` and then
over the scales, so swapping the two arguments gives bit-identical results.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np
from numba import njit

from .errors import InvalidInputError

__all__ = [
    "TimeSeries",
    "Envelope",
    "EpsilonSchedule",
    "as_values",
    "as_schedule",
    "compute_envelope",
    "naive_envelope_oracle",
    "dubuc_variation",
    "envelope_intersection",
    "envelope_union",
    "intersection_ratio",
    "ratio_curve",
    "mds",
    "mdd",
    "generic_epsilon_schedule",
    "envelope_stack",
    "mdd_matrix",
]


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Equal-interval real-valued series with an optional class label."""

    values: np.ndarray
    label: str | None = None

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise InvalidInputError("a time series must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("time series values must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self):
        return self.values.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    @property
    def d(self) -> int:
        return self.values.shape[0]


SeriesLike = Union[TimeSeries, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class Envelope:
    """Upper and lower bound traces of one series at one scale."""

    epsilon: int
    upper: np.ndarray
    lower: np.ndarray

    def __post_init__(self):
        if self.upper.shape != self.lower.shape:
            raise InvalidInputError("upper and lower bounds differ in length")

    def __len__(self):
        return self.upper.shape[0]

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower


@dataclass(frozen=True)
class EpsilonSchedule:
    """Strictly increasing positive integer scales."""

    scales: tuple[int, ...]

    def __post_init__(self):
        scales = tuple(int(s) for s in self.scales)
        if not scales:
            raise InvalidInputError("epsilon schedule is empty")
        if scales[0] < 1:
            raise InvalidInputError("epsilon scales must be >= 1")
        if any(b <= a for a, b in zip(scales, scales[1:])):
            raise InvalidInputError(f"epsilon scales must be strictly increasing: {scales}")
        object.__setattr__(self, "scales", scales)

    def __iter__(self):
        return iter(self.scales)

    def __len__(self):
        return len(self.scales)

    def check_length(self, d: int) -> None:
        if self.scales[-1] >= d:
            raise InvalidInputError(
                f"epsilon {self.scales[-1]} must be smaller than the series length {d}"
            )

    def as_array(self) -> np.ndarray:
        return np.asarray(self.scales, dtype=np.int64)

    def __str__(self):
        return ",".join(str(s) for s in self.scales)


def as_values(x: SeriesLike) -> np.ndarray:
    """Return ``x`` as a finite, non-empty float64 vector."""
    if isinstance(x, TimeSeries):
        return x.values
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInputError("a time series must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("time series values must be finite")
    return arr


def as_schedule(schedule: EpsilonSchedule | Iterable[int]) -> EpsilonSchedule:
    if isinstance(schedule, EpsilonSchedule):
        return schedule
    return EpsilonSchedule(tuple(schedule))


def _check_epsilon(epsilon) -> int:
    if isinstance(epsilon, (bool, np.bool_)) or int(epsilon) != epsilon:
        raise InvalidInputError(f"epsilon must be an integer, got {epsilon!r}")
    epsilon = int(epsilon)
    if epsilon < 0:
        raise InvalidInputError(f"epsilon must be non-negative, got {epsilon}")
    return epsilon


def _check_same_length(x: np.ndarray, y: np.ndarray) -> None:
    if x.shape[0] != y.shape[0]:
        raise InvalidInputError(
            f"series lengths differ ({x.shape[0]} vs {y.shape[0]}); "
            "the measure is defined for equal-length series only"
        )


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def _sliding_bounds(x, eps, upper, lower):
    # Monotonic index queues; every index is pushed once, so arrays of size d
    # with head/tail cursors are enough.
    d = x.shape[0]
    qmax = np.empty(d, dtype=np.int64)
    qmin = np.empty(d, dtype=np.int64)
    hmax = 0
    tmax = 0
    hmin = 0
    tmin = 0
    nxt = 0
    for t in range(d):
        hi = t + eps
        if hi > d - 1:
            hi = d - 1
        while nxt <= hi:
            v = x[nxt]
            while tmax > hmax and x[qmax[tmax - 1]] <= v:
                tmax -= 1
            qmax[tmax] = nxt
            tmax += 1
            while tmin > hmin and x[qmin[tmin - 1]] >= v:
                tmin -= 1
            qmin[tmin] = nxt
            tmin += 1
            nxt += 1
        lo = t - eps
        while qmax[hmax] < lo:
            hmax += 1
        while qmin[hmin] < lo:
            hmin += 1
        upper[t] = x[qmax[hmax]]
        lower[t] = x[qmin[hmin]]


@njit(cache=True, nogil=True)
def _stack_bounds(x, scales):
    k = scales.shape[0]
    d = x.shape[0]
    upper = np.empty((k, d))
    lower = np.empty((k, d))
    for i in range(k):
        _sliding_bounds(x, min(scales[i], d), upper[i], lower[i])
    return upper, lower


@njit(cache=True, nogil=True)
def _overlap_sums(ua, la, ub, lb):
    inter = 0.0
    union = 0.0
    for t in range(ua.shape[0]):
        lo_in = la[t] if la[t] > lb[t] else lb[t]
        hi_in = ua[t] if ua[t] < ub[t] else ub[t]
        w = hi_in - lo_in
        if w > 0.0:
            inter += w
        lo_out = la[t] if la[t] < lb[t] else lb[t]
        hi_out = ua[t] if ua[t] > ub[t] else ub[t]
        w = hi_out - lo_out
        if w > 0.0:
            union += w
    return inter, union


@njit(cache=True, nogil=True)
def _ratio(ua, la, ub, lb):
    inter, union = _overlap_sums(ua, la, ub, lb)
    if union == 0.0:
        return 1.0
    r = inter / union
    return 1.0 if r > 1.0 else r


@njit(cache=True, nogil=True)
def _ratios(UA, LA, UB, LB):
    k = UA.shape[0]
    out = np.empty(k)
    for i in range(k):
        out[i] = _ratio(UA[i], LA[i], UB[i], LB[i])
    return out


@njit(cache=True, nogil=True)
def _normalized_auc(scales, ratios):
    k = scales.shape[0]
    if k == 1:
        return ratios[0]
    area = 0.0
    for i in range(1, k):
        area += 0.5 * (ratios[i - 1] + ratios[i]) * (scales[i] - scales[i - 1])
    s = area / (scales[k - 1] - scales[0])
    if s > 1.0:
        return 1.0
    if s < 0.0:
        return 0.0
    return s


@njit(cache=True, nogil=True)
def _mds_from_stacks(UA, LA, UB, LB, scales):
    return _normalized_auc(scales, _ratios(UA, LA, UB, LB))


@njit(cache=True, nogil=True)
def _mds_kernel(x, y, scales):
    UA, LA = _stack_bounds(x, scales)
    UB, LB = _stack_bounds(y, scales)
    return _mds_from_stacks(UA, LA, UB, LB, scales)


@njit(cache=True, nogil=True)
def _mdd_matrix(UA, LA, UB, LB, scales):
    n = UA.shape[0]
    m = UB.shape[0]
    out = np.empty((n, m))
    for i in range(n):
        for j in range(m):
            out[i, j] = 1.0 - _mds_from_stacks(UA[i], LA[i], UB[j], LB[j], scales)
    return out


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------


def compute_envelope(x: SeriesLike, epsilon: int) -> Envelope:
    """Sliding-window max/min envelope of ``x`` at scale ``epsilon``.

    Linear in ``len(x)`` for any ``epsilon`` (monotonic deque). Windows are
    truncated at both ends; ``epsilon = 0`` returns the trace itself.
    """
    values = as_values(x)
    eps = min(_check_epsilon(epsilon), values.shape[0])
    upper = np.empty_like(values)
    lower = np.empty_like(values)
    _sliding_bounds(values, eps, upper, lower)
    return Envelope(int(epsilon), upper, lower)


def naive_envelope_oracle(x: SeriesLike, epsilon: int) -> Envelope:
    """Reference envelope by direct window scan, O(d * epsilon). Tests only."""
    values = as_values(x)
    eps = _check_epsilon(epsilon)
    d = len(values)
    upper = np.empty(d)
    lower = np.empty(d)
    for t in range(d):
        hi = lo = values[t]
        for s in range(max(0, t - eps), min(d - 1, t + eps) + 1):
            v = values[s]
            if v > hi:
                hi = v
            if v < lo:
                lo = v
        upper[t] = hi
        lower[t] = lo
    return Envelope(eps, upper, lower)


def dubuc_variation(x: SeriesLike, epsilon: int) -> float:
    """Dubuc's epsilon-variation: total envelope width divided by epsilon**2."""
    eps = _check_epsilon(epsilon)
    if eps == 0:
        raise InvalidInputError("dubuc_variation is undefined for epsilon = 0")
    env = compute_envelope(x, eps)
    total = 0.0
    for w in (env.upper - env.lower).tolist():
        total += w
    return total / (eps * eps)


def _check_envelopes(a: Envelope, b: Envelope) -> None:
    if len(a) != len(b):
        raise InvalidInputError(f"envelope lengths differ ({len(a)} vs {len(b)})")
    if a.epsilon != b.epsilon:
        raise InvalidInputError(f"envelope scales differ ({a.epsilon} vs {b.epsilon})")


def envelope_intersection(a: Envelope, b: Envelope) -> float:
    _check_envelopes(a, b)
    return _overlap_sums(a.upper, a.lower, b.upper, b.lower)[0]


def envelope_union(a: Envelope, b: Envelope) -> float:
    _check_envelopes(a, b)
    return _overlap_sums(a.upper, a.lower, b.upper, b.lower)[1]


def intersection_ratio(x: SeriesLike, y: SeriesLike, epsilon: int) -> float:
    """Summed envelope overlap over summed envelope span, in [0, 1].

    Returns 1.0 when the span is zero, which only happens when both series
    are identical.
    """
    xv, yv = as_values(x), as_values(y)
    _check_same_length(xv, yv)
    a = compute_envelope(xv, epsilon)
    b = compute_envelope(yv, epsilon)
    return float(_ratio(a.upper, a.lower, b.upper, b.lower))


def _prepare_pair(x, y, schedule):
    xv, yv = as_values(x), as_values(y)
    _check_same_length(xv, yv)
    sched = as_schedule(schedule)
    sched.check_length(xv.shape[0])
    return xv, yv, sched.as_array()


def ratio_curve(x: SeriesLike, y: SeriesLike, schedule) -> np.ndarray:
    """Intersection ratio at every scale of ``schedule``."""
    xv, yv, scales = _prepare_pair(x, y, schedule)
    UA, LA = _stack_bounds(xv, scales)
    UB, LB = _stack_bounds(yv, scales)
    return _ratios(UA, LA, UB, LB)


def mds(x: SeriesLike, y: SeriesLike, schedule) -> float:
    """Multiscale Dubuc similarity in [0, 1].

    Trapezoidal area under the ratio-vs-scale curve divided by
    ``scales[-1] - scales[0]``; a single-scale schedule returns that ratio.
    """
    xv, yv, scales = _prepare_pair(x, y, schedule)
    return float(_mds_kernel(xv, yv, scales))


def mdd(x: SeriesLike, y: SeriesLike, schedule) -> float:
    """Multiscale Dubuc distance, ``1 - mds``. A pseudometric on equal-length series."""
    return 1.0 - mds(x, y, schedule)


def generic_epsilon_schedule(d: int, alpha: float = 0.4) -> EpsilonSchedule:
    """All powers of two ``p`` with ``1 <= p <= alpha * d``."""
    if not 0.0 < alpha < 1.0:
        raise InvalidInputError(f"alpha must lie in (0, 1), got {alpha}")
    if d < 1:
        raise InvalidInputError(f"series length must be positive, got {d}")
    limit = alpha * d
    if limit < 1:
        raise InvalidInputError(f"alpha * d = {limit:g} < 1 leaves an empty schedule")
    scales = []
    p = 1
    while p <= limit:
        scales.append(p)
        p *= 2
    return EpsilonSchedule(tuple(scales))


def envelope_stack(series: Sequence[SeriesLike], schedule) -> tuple[np.ndarray, np.ndarray]:
    """Upper/lower bounds of many series at every scale, shaped (n, k, d)."""
    sched = as_schedule(schedule)
    rows = [as_values(s) for s in series]
    if not rows:
        raise InvalidInputError("no series given")
    d = rows[0].shape[0]
    if any(r.shape[0] != d for r in rows):
        raise InvalidInputError("all series must share one length")
    sched.check_length(d)
    scales = sched.as_array()
    upper = np.empty((len(rows), len(scales), d))
    lower = np.empty_like(upper)
    for i, r in enumerate(rows):
        upper[i], lower[i] = _stack_bounds(r, scales)
    return upper, lower


def mdd_matrix(queries: Sequence[SeriesLike], references: Sequence[SeriesLike], schedule) -> np.ndarray:
    """Pairwise distance matrix; entry ``[i, j]`` equals ``mdd(queries[i], references[j])`` bit for bit."""
    sched = as_schedule(schedule)
    UA, LA = envelope_stack(queries, sched)
    UB, LB = envelope_stack(references, sched)
    if UA.shape[2] != UB.shape[2]:
        raise InvalidInputError("query and reference series differ in length")
    return _mdd_matrix(UA, LA, UB, LB, sched.as_array())
