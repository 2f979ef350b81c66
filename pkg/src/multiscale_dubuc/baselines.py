"""Reference measures: Euclidean distance, Sakoe-Chiba DTW and LCSS."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numba import njit

from .core import SeriesLike, _check_same_length, as_values
from .errors import InvalidInputError

__all__ = [
    "DtwConfig",
    "LcssConfig",
    "DEFAULT_WINDOW_GRID",
    "euclidean",
    "dtw",
    "lcss_distance",
    "learn_dtw_window",
    "pairwise_matrix",
]

# percentages of the series length searched when learning the DTW band
DEFAULT_WINDOW_GRID = tuple(range(0, 21))


@dataclass(frozen=True)
class DtwConfig:
    """Sakoe-Chiba half-width in samples; ``None`` means unconstrained."""

    window: int | None = None

    def __post_init__(self):
        if self.window is not None and (int(self.window) != self.window or self.window < 0):
            raise InvalidInputError(f"DTW window must be a non-negative integer, got {self.window!r}")

    def __str__(self):
        return "window=full" if self.window is None else f"window={self.window}"


@dataclass(frozen=True)
class LcssConfig:
    match_epsilon: float = 1.0
    delta: int | None = None

    def __post_init__(self):
        if not self.match_epsilon > 0:
            raise InvalidInputError(f"LCSS match threshold must be > 0, got {self.match_epsilon}")
        if self.delta is not None and self.delta < 0:
            raise InvalidInputError(f"LCSS delta must be >= 0, got {self.delta}")

    def __str__(self):
        delta = "none" if self.delta is None else str(self.delta)
        return f"eps={self.match_epsilon!r};delta={delta}"


@njit(cache=True, nogil=True)
def _sq_euclidean(x, y):
    acc = 0.0
    for t in range(x.shape[0]):
        diff = x[t] - y[t]
        acc += diff * diff
    return acc


@njit(cache=True, nogil=True)
def _dtw_cost(x, y, w):
    # Rolling two rows; cells outside |i - j| <= w stay at +inf.
    n = x.shape[0]
    m = y.shape[0]
    inf = np.inf
    prev = np.full(m + 1, inf)
    curr = np.full(m + 1, inf)
    prev[0] = 0.0
    for i in range(1, n + 1):
        curr[:] = inf
        lo = max(1, i - w)
        hi = min(m, i + w)
        for j in range(lo, hi + 1):
            diff = x[i - 1] - y[j - 1]
            best = prev[j - 1]
            if prev[j] < best:
                best = prev[j]
            if curr[j - 1] < best:
                best = curr[j - 1]
            curr[j] = diff * diff + best
        prev, curr = curr, prev
    return prev[m]


@njit(cache=True, nogil=True)
def _lcss_length(x, y, eps, delta):
    n = x.shape[0]
    m = y.shape[0]
    table = np.zeros((n + 1, m + 1), dtype=np.int64)
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            if abs(i - j) <= delta and abs(x[i - 1] - y[j - 1]) <= eps:
                table[i, j] = table[i - 1, j - 1] + 1
            elif table[i - 1, j] >= table[i, j - 1]:
                table[i, j] = table[i - 1, j]
            else:
                table[i, j] = table[i, j - 1]
    return table[n, m]


def _pair(x, y):
    xv, yv = as_values(x), as_values(y)
    _check_same_length(xv, yv)
    return xv, yv


def euclidean(x: SeriesLike, y: SeriesLike) -> float:
    xv, yv = _pair(x, y)
    return math.sqrt(_sq_euclidean(xv, yv))


def dtw(x: SeriesLike, y: SeriesLike, config: DtwConfig | None = None) -> float:
    """DTW with squared local cost and a final square root.

    With ``window=0`` only the diagonal path is admissible and the result
    equals :func:`euclidean` exactly.
    """
    xv, yv = _pair(x, y)
    config = config or DtwConfig()
    d = xv.shape[0]
    w = d if config.window is None else min(int(config.window), d)
    return math.sqrt(_dtw_cost(xv, yv, w))


def lcss_distance(x: SeriesLike, y: SeriesLike, config: LcssConfig | None = None) -> float:
    """``1 - LCSS / min(len)``, with threshold matching and an optional time window."""
    xv, yv = _pair(x, y)
    config = config or LcssConfig()
    delta = max(xv.shape[0], yv.shape[0]) if config.delta is None else int(config.delta)
    length = _lcss_length(xv, yv, float(config.match_epsilon), delta)
    return 1.0 - length / min(xv.shape[0], yv.shape[0])


def pairwise_matrix(queries: Sequence[SeriesLike], references: Sequence[SeriesLike], distance) -> np.ndarray:
    """Full distance matrix for an arbitrary two-argument distance callable."""
    qs = [as_values(q) for q in queries]
    rs = [as_values(r) for r in references]
    out = np.empty((len(qs), len(rs)))
    for i, q in enumerate(qs):
        for j, r in enumerate(rs):
            out[i, j] = distance(q, r)
    return out


def _loocv_from_matrix(dist: np.ndarray, labels: Sequence[str]) -> float:
    dist = dist.copy()
    np.fill_diagonal(dist, np.inf)
    nearest = np.argmin(dist, axis=1)
    labels = list(labels)
    return sum(labels[j] == labels[i] for i, j in enumerate(nearest)) / len(labels)


def learn_dtw_window(train, candidates: Sequence[float] = DEFAULT_WINDOW_GRID) -> DtwConfig:
    """Pick the Sakoe-Chiba window that maximizes 1-NN leave-one-out accuracy.

    ``train`` is a sequence of labelled :class:`TimeSeries`. Candidates are
    percentages of the series length, floored to whole samples. Ties go to the
    smallest window.
    """
    train = list(train)
    if not train:
        raise InvalidInputError("cannot learn a DTW window from an empty training set")
    candidates = list(candidates)
    if not candidates:
        raise InvalidInputError("no candidate windows given")
    if any(not 0 <= c <= 100 for c in candidates):
        raise InvalidInputError("window percentages must lie in [0, 100]")
    d = len(train[0])
    windows = sorted({int(math.floor(c * d / 100.0)) for c in candidates})
    if len(train) < 2:
        return DtwConfig(windows[0])
    labels = [s.label for s in train]
    values = [as_values(s) for s in train]
    n = len(values)
    best_window, best_acc = windows[0], -1.0
    for w in windows:
        dist = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                dist[i, j] = dist[j, i] = _dtw_cost(values[i], values[j], min(w, d))
        acc = _loocv_from_matrix(dist, labels)
        if acc > best_acc:
            best_window, best_acc = w, acc
    return DtwConfig(best_window)
