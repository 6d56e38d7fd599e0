"""Exception hierarchy shared by every module of the package."""


class GlinfError(Exception):
    """Base class for all errors raised by glinf."""


class InvalidInput(GlinfError, ValueError):
    pass


class AsymmetricInput(InvalidInput):
    pass


class NegativeParameter(InvalidInput):
    pass


class NonFiniteEntry(InvalidInput):
    pass


class DimensionError(InvalidInput):
    pass


class NonPositiveDiagonal(InvalidInput):
    pass


class NotPositiveDefinite(GlinfError, ValueError):
    pass


class ConvergenceFailure(GlinfError, RuntimeError):
    pass


class NumericalBreakdown(GlinfError, RuntimeError):
    def __init__(self, iteration, message=None):
        self.iteration = iteration
        super().__init__(message or f"non-finite iterate at iteration {iteration}")


class ConstraintActive(GlinfError, ValueError):
    """The unconstrained oracle does not apply: the bound is active."""


class OracleAuditFailure(GlinfError, RuntimeError):
    pass


class RaggedRows(InvalidInput):
    pass


class NonNumericCell(InvalidInput):
    def __init__(self, row, column, value):
        self.row, self.column, self.value = row, column, value
        super().__init__(f"non-numeric cell {value!r} at row {row}, column {column}")


class EmptyFile(InvalidInput):
    pass
