"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Input violates a precondition (empty series, bad scale, length mismatch, ...)."""


class VariableLengthError(InvalidInputError):
    """A dataset split holds series of different lengths."""


class MissingValuesError(InvalidInputError):
    """A dataset split contains NaN observations."""


class UndefinedGainError(ZeroDivisionError):
    """Accuracy gain against a reference whose accuracy is zero."""
