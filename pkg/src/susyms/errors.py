"""Exception hierarchy shared by all susyms modules."""


class SusyError(Exception):
    """Base class for every error raised by this package."""


class ParityError(SusyError):
    """An odd quantity was used where an even one is required (or vice versa)."""


class UsageError(SusyError):
    """An operation was called with arguments outside its contract."""


class ClosureError(SusyError):
    """A bracket does not re-expand in the span of the given basis."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class TruncationError(SusyError):
    """An adjoint series failed to terminate within the allowed depth."""


class ConsistencyError(SusyError):
    """Two independently built data sets disagree."""


class NoMatch(SusyError):
    """An element lies outside the implemented normal-form procedure."""


class UnsupportedSubalgebra(SusyError):
    pass


class ReductionError(SusyError):
    """A reduced residual has components outside the expected span."""

    def __init__(self, message, stray=None):
        super().__init__(message)
        self.stray = stray


class DomainError(SusyError):
    """Numeric evaluation left the domain of a function."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class ExpressionSyntaxError(SusyError, SyntaxError):
    """Malformed expression source; carries 1-based line and column."""

    def __init__(self, message, line, column, text=None):
        SyntaxError.__init__(self, f"{message} at column {column}",
                             ("<expression>", line, column, text))
        self.line = line
        self.column = column
