"""Exception hierarchy shared by all modules."""


class AnalysisError(Exception):
    """Base class for every error raised by the package."""


class TransitionMatrixError(AnalysisError, ValueError):
    pass


class ZeroRow(TransitionMatrixError):
    pass


class ZeroColumn(TransitionMatrixError):
    pass


class NonBinaryEntry(TransitionMatrixError):
    pass


class DimensionTooSmall(TransitionMatrixError):
    pass


class NotATransitionMatrix(TransitionMatrixError):
    """Inferred matrix has an all-zero row or column."""


class DimensionMismatch(AnalysisError, ValueError):
    pass


class NoConvergence(AnalysisError):
    pass


class SymbolOutOfRange(AnalysisError, ValueError):
    pass


class InvalidMap(AnalysisError, ValueError):
    pass


class InvalidPartition(AnalysisError, ValueError):
    pass


class OutOfDomain(AnalysisError, ValueError):
    pass


class AtBreakpoint(AnalysisError):
    """One-sided derivatives differ at a branch endpoint."""

    def __init__(self, x, left, right):
        super().__init__(f"x={x!r} is a breakpoint: left derivative {left!r}, right derivative {right!r}")
        self.x = x
        self.left = left
        self.right = right


class NotInSupport(AnalysisError, ValueError):
    pass


class NotInImage(AnalysisError, ValueError):
    pass


class UnknownBuiltin(AnalysisError, KeyError):
    pass


class BadParams(AnalysisError, ValueError):
    pass


class EmptyCylinder(AnalysisError):
    pass


class AmbiguousBranch(AnalysisError):
    pass


class EnumerationCapExceeded(AnalysisError):
    pass


class SlowConvergence(AnalysisError):
    pass


class AtSpecialPoint(AnalysisError, ValueError):
    pass


class ConfigError(AnalysisError, ValueError):
    pass
