"""Exception hierarchy shared across the package.

The CLI maps these onto its exit-code contract: data errors exit 2,
parameter errors exit 3, consistency errors exit 4 (see cli.py).
"""


class CethermoError(Exception):
    """Base class for all errors raised by this package."""


class DataValidationError(CethermoError):
    """Input data is malformed: wrong shape, non-finite, or unparseable."""


class DegenerateSampleError(DataValidationError):
    """The sample's neighbor structure is degenerate (duplicates swamp it)."""


class ParameterError(CethermoError):
    """A parameter value or combination of parameters is invalid."""


class StatisticsError(ParameterError):
    """Too few samples for the requested estimate to be meaningful."""


class MatrixError(ParameterError):
    """A matrix argument is not symmetric/positive-definite as required."""


class ConsistencyError(CethermoError):
    """Paired inputs do not belong together (e.g. trajectory/metadata)."""
