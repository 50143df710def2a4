"""Exception hierarchy.

Every error raised on purpose by this package derives from
:class:`WirtingerError`, so callers can catch the whole family at once.
"""


class WirtingerError(Exception):
    """Base class for all package errors."""


class RankDeficient(WirtingerError, ValueError):
    """Spanning vectors are (numerically) linearly dependent."""


class BadMetric(WirtingerError, ValueError):
    """Metric is not symmetric positive definite."""


class OddDimension(WirtingerError, ValueError):
    """An even-sized object was expected."""


class TooLarge(WirtingerError, ValueError):
    """Input exceeds the size bound of a combinatorial routine."""


class DimensionMismatch(WirtingerError, ValueError):
    """Shapes of the inputs do not agree."""


class IncompatibleStructure(WirtingerError, ValueError):
    """(metric, J) pair violates J^2 = -I or metric compatibility."""


class NotUnit(WirtingerError, ValueError):
    """A point expected on the unit sphere is not of unit length."""


class NotSkew(WirtingerError, ValueError):
    """Matrix is not antisymmetric."""


class UnknownCatalogEntry(WirtingerError, KeyError):
    """Name is not in the catalog."""

    def __str__(self) -> str:
        return Exception.__str__(self)


class ChartDomain(WirtingerError, ValueError):
    """Point lies outside (or too close to the edge of) a chart domain."""


class StepTooLarge(WirtingerError, ValueError):
    """Finite-difference step is too coarse for the chart domain."""


class DegenerateImmersion(WirtingerError, ValueError):
    """Chart differential drops rank."""


class GridTooSmall(WirtingerError, ValueError):
    """Grid has too few samples along some axis."""


class ConvergenceFailure(WirtingerError, ArithmeticError):
    """An underlying eigensolver did not converge."""


class ConfigError(WirtingerError, ValueError):
    """Invalid CLI job configuration."""


class ParseError(WirtingerError, ValueError):
    """Malformed expression text.

    ``offset`` is the 1-based character column at which parsing failed;
    end of input is reported as ``len(text) + 1``.
    """

    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset
        self.text = text


class EvalError(WirtingerError, ArithmeticError):
    """Expression evaluation failed (division by zero, domain error, overflow)."""
