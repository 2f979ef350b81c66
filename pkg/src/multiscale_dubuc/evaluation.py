"""1-NN evaluation: leave-one-out expected accuracy, test accuracy, gains, quadrants."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .baselines import DtwConfig, LcssConfig, dtw, euclidean, lcss_distance, pairwise_matrix
from .core import SeriesLike, as_schedule, mdd, mdd_matrix
from .data import LabeledDataset
from .errors import InvalidInputError, UndefinedGainError

__all__ = [
    "MEASURE_KINDS",
    "MeasureSpec",
    "EvalReport",
    "distance_matrix",
    "nn1_classify",
    "loocv_accuracy",
    "test_accuracy",
    "accuracy_gain",
    "sharpshooter_quadrant",
    "mean_sem",
]

MEASURE_KINDS = ("mdd", "eud", "dtw", "lcss")
QUADRANTS = ("TP", "FP", "TN", "FN")


@dataclass(frozen=True)
class MeasureSpec:
    """A distance measure and its parameters.

    ``params`` is an :class:`EpsilonSchedule` for ``mdd``, a :class:`DtwConfig`
    for ``dtw``, an :class:`LcssConfig` for ``lcss`` and ``None`` for ``eud``.
    """

    kind: str
    params: object = None

    def __post_init__(self):
        kind = self.kind.lower()
        if kind not in MEASURE_KINDS:
            raise InvalidInputError(f"unknown measure {self.kind!r}; expected one of {MEASURE_KINDS}")
        object.__setattr__(self, "kind", kind)
        params = self.params
        if kind == "mdd":
            if params is None:
                raise InvalidInputError("mdd needs an epsilon schedule")
            params = as_schedule(params)
        elif kind == "dtw":
            params = params if params is not None else DtwConfig()
            if not isinstance(params, DtwConfig):
                raise InvalidInputError("dtw parameters must be a DtwConfig")
        elif kind == "lcss":
            params = params if params is not None else LcssConfig()
            if not isinstance(params, LcssConfig):
                raise InvalidInputError("lcss parameters must be an LcssConfig")
        elif params is not None:
            raise InvalidInputError("eud takes no parameters")
        object.__setattr__(self, "params", params)

    @property
    def name(self) -> str:
        return self.kind

    def describe(self) -> str:
        return "" if self.params is None else str(self.params)

    def distance(self, x: SeriesLike, y: SeriesLike) -> float:
        if self.kind == "mdd":
            return mdd(x, y, self.params)
        if self.kind == "eud":
            return euclidean(x, y)
        if self.kind == "dtw":
            return dtw(x, y, self.params)
        return lcss_distance(x, y, self.params)

    __call__ = distance


Measure = Union[MeasureSpec, Callable[[SeriesLike, SeriesLike], float]]


def distance_matrix(queries: Sequence[SeriesLike], references: Sequence[SeriesLike], measure: Measure) -> np.ndarray:
    """``[i, j]`` is the distance from ``queries[i]`` to ``references[j]``."""
    if isinstance(measure, MeasureSpec) and measure.kind == "mdd":
        return mdd_matrix(queries, references, measure.params)
    return pairwise_matrix(queries, references, measure)


def _nearest(dist_row: np.ndarray) -> int:
    # argmin returns the first minimum: ties go to the lowest training index
    return int(np.argmin(dist_row))


def nn1_classify(train: Sequence, query: SeriesLike, measure: Measure):
    train = list(train)
    if not train:
        raise InvalidInputError("training set is empty")
    row = distance_matrix([query], train, measure)[0]
    return train[_nearest(row)].label


def loocv_accuracy(train: Sequence, measure: Measure) -> float:
    """Leave-one-out 1-NN accuracy on the training split (the expected accuracy)."""
    train = list(train)
    if len(train) < 2:
        raise InvalidInputError("leave-one-out needs at least two training instances")
    dist = distance_matrix(train, train, measure)
    np.fill_diagonal(dist, np.inf)
    hits = sum(train[_nearest(dist[i])].label == s.label for i, s in enumerate(train))
    return hits / len(train)


def test_accuracy(ds: LabeledDataset, measure: Measure) -> float:
    """1-NN accuracy of the test split against the training split (the actual accuracy)."""
    if not ds.test:
        raise InvalidInputError(f"{ds.name}: test split is empty")
    dist = distance_matrix(ds.test, ds.train, measure)
    hits = sum(ds.train[_nearest(dist[i])].label == s.label for i, s in enumerate(ds.test))
    return hits / len(ds.test)


test_accuracy.__test__ = False  # keep pytest from collecting it when imported into tests


def accuracy_gain(acc_mu: float, acc_ref: float) -> float:
    if acc_ref <= 0:
        raise UndefinedGainError("reference accuracy is zero; gain is undefined")
    return acc_mu / acc_ref


def sharpshooter_quadrant(expected_gain: float, actual_gain: float) -> str:
    """TP / FP / TN / FN; a gain of exactly 1 counts as not improved."""
    if expected_gain > 1:
        return "TP" if actual_gain > 1 else "FP"
    return "FN" if actual_gain > 1 else "TN"


@dataclass
class EvalReport:
    dataset: str
    measure: MeasureSpec
    expected_acc: float
    actual_acc: float
    gains: dict = field(default_factory=dict)
    quadrants: dict = field(default_factory=dict)

    def add_reference(self, ref_name: str, ref: "EvalReport") -> None:
        """Record gains and the quadrant against ``ref``; undefined gains store ``None``."""
        try:
            g_hat = accuracy_gain(self.expected_acc, ref.expected_acc)
            g = accuracy_gain(self.actual_acc, ref.actual_acc)
        except UndefinedGainError:
            self.gains[ref_name] = None
            self.quadrants[ref_name] = None
            return
        self.gains[ref_name] = (g_hat, g)
        self.quadrants[ref_name] = sharpshooter_quadrant(g_hat, g)


def evaluate(ds: LabeledDataset, measure: MeasureSpec) -> EvalReport:
    return EvalReport(ds.name, measure, loocv_accuracy(ds.train, measure), test_accuracy(ds, measure))


def attach_gains(reports: Sequence[EvalReport]) -> None:
    """Cross-reference every report of one dataset against every other one."""
    for rep in reports:
        for ref in reports:
            if ref is not rep:
                rep.add_reference(ref.measure.name, ref)


def mean_sem(values: Sequence[float]) -> tuple[float, float]:
    """Mean and standard error of the mean (sample std / sqrt(n))."""
    vals = np.asarray(list(values), dtype=float)
    if vals.size == 0:
        return math.nan, math.nan
    if vals.size == 1:
        return float(vals[0]), 0.0
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(vals.size))
