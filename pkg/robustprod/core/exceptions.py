from typing import Any, Dict, Optional


class RobustProdError(Exception):
    """Base class for every error raised by robustprod services."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


"""Data errors: the input cannot be used as given"""


class DataError(RobustProdError):
    pass


class PanelFormatError(DataError):
    pass


class UnmappedColumnError(DataError):
    pass


class DuplicateRecordError(DataError):
    pass


class DeflatorCoverageError(DataError):
    pass


class InvalidScaleError(DataError):
    pass


class UnknownRecordError(DataError):
    pass


class ZeroDenominatorError(DataError):
    pass


class DimensionMismatchError(DataError):
    pass


class EmptyInputError(DataError):
    pass


class InsufficientObservationsError(DataError):
    pass


class InvalidParameterError(DataError):
    pass


"""Numerical errors: the input is well formed but the computation is undefined"""


class NumericalError(RobustProdError):
    pass


class NonFiniteCoordinateError(NumericalError):
    pass


class ReweightingUndefinedError(NumericalError):
    pass


class BreakdownViolationError(NumericalError):
    pass


class CollinearityError(NumericalError):
    pass


class RankDeficientInstrumentsError(NumericalError):
    pass


class UnderidentifiedError(NumericalError):
    pass


class SingularCovarianceError(NumericalError):
    pass


class DegreesOfFreedomError(NumericalError):
    pass
