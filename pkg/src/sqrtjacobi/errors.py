"""Exception hierarchy shared by every module of the package."""


class JacobiError(Exception):
    """Base class for all errors raised by sqrtjacobi."""


class NonSquare(JacobiError, ValueError):
    pass


class AsymmetryExceeded(JacobiError, ValueError):
    pass


class NonFinite(JacobiError, ValueError):
    pass


class DegenerateInput(JacobiError, ValueError):
    pass


class ZeroOffDiagonal(JacobiError, ValueError):
    """The pivot entry is exactly zero; use the identity rotation instead."""


class ParameterOutOfRange(JacobiError, ValueError):
    pass


class IndexOutOfRange(JacobiError, IndexError):
    pass


class DidNotConverge(JacobiError, RuntimeError):
    """Sweep budget exhausted above the stopping threshold.

    The partial solve result is kept on ``result`` so callers can still
    inspect the history and the current diagonal.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class InsufficientHistory(JacobiError, ValueError):
    pass


class DimensionTooLarge(JacobiError, ValueError):
    pass


class RootIsolationFailed(JacobiError, ArithmeticError):
    pass


class DimensionMismatch(JacobiError, ValueError):
    pass


class ParseError(JacobiError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnsupportedField(JacobiError, ValueError):
    pass


class BadSpec(JacobiError, ValueError):
    pass


class DegenerateBlockWarning(UserWarning):
    """A 2x2 block with zero off-diagonal and equal diagonal entries."""
