"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line can map a failure
family onto a distinct process status.
"""


class FejerLabError(Exception):
    exit_code = 3


class DimensionMismatch(FejerLabError, ValueError):
    exit_code = 4


class ZeroVector(FejerLabError, ValueError):
    """Raised when a direction is requested for a (numerically) zero vector."""

    exit_code = 4


class UnsupportedVariant(FejerLabError, TypeError):
    exit_code = 4


class TruncationOverflow(FejerLabError):
    """The truncated right shift would push mass past the last coordinate."""

    exit_code = 5


class SingularSystem(FejerLabError):
    exit_code = 5


class NotAFejerPoint(FejerLabError, ValueError):
    exit_code = 6


class IndexOutOfRange(FejerLabError, IndexError):
    exit_code = 6


class AllDegenerate(FejerLabError):
    exit_code = 7


class EmptyTail(FejerLabError, ValueError):
    exit_code = 7


class NotARay(FejerLabError):
    exit_code = 7


class ZbarNotInSet(FejerLabError, ValueError):
    exit_code = 7


class DegenerateTheta(FejerLabError, ValueError):
    exit_code = 8


class ConfigError(FejerLabError, ValueError):
    exit_code = 2


class SummaryError(FejerLabError):
    """A summary file is missing or cannot be parsed."""

    exit_code = 9
