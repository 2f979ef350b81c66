"""Multiscale Dubuc distance for time series, baselines and a 1-NN benchmark."""
from .core import (
    EpsilonSchedule,
    Envelope,
    TimeSeries,
    compute_envelope,
    dubuc_variation,
    envelope_intersection,
    envelope_union,
    generic_epsilon_schedule,
    intersection_ratio,
    mdd,
    mdd_matrix,
    mds,
    naive_envelope_oracle,
    ratio_curve,
)
from .errors import InvalidInputError, MissingValuesError, UndefinedGainError, VariableLengthError

__version__ = "0.1.0"
