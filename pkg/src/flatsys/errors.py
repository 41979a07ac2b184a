"""Exception hierarchy. Every error raised on purpose derives from FlatSysError."""


class FlatSysError(Exception):
    pass


class InputError(FlatSysError, ValueError):
    """Malformed user input (files, names, arguments)."""


class ParseError(InputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnbalancedGluing(InputError):
    pass


class NonTranslationGluing(InputError):
    pass


class NonSimplePolygon(InputError):
    pass


class DegenerateCell(InputError):
    pass


class UnknownName(InputError):
    pass


class DegenerateTriangle(FlatSysError, ValueError):
    pass


class ZeroVector(FlatSysError, ValueError):
    pass


class GaussBonnetMismatch(FlatSysError):
    pass


class FlipLimitExceeded(FlatSysError):
    pass


class NonConvexCell(FlatSysError):
    pass


class BoundaryEdge(FlatSysError):
    pass


class BudgetExceeded(FlatSysError):
    pass


class UnknownDirection(FlatSysError):
    pass


class NonSimpleCurve(FlatSysError):
    pass


class FixedPointCountMismatch(FlatSysError):
    pass


class DegenerationUnavoidable(FlatSysError):
    pass
