"""Exception classes shared across the package."""


class QFWittError(Exception):
    """Base class for all errors raised by qfwitt."""


class InvalidField(QFWittError):
    pass


class ParseError(QFWittError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)


class ZeroSign(QFWittError):
    pass


class InfiniteValuation(QFWittError):
    pass


class NotPrime(QFWittError):
    pass


class DuplicateModulus(QFWittError):
    pass


class UnsupportedDegree(QFWittError):
    pass


class DegenerateForm(QFWittError):
    pass


class MissingPrimes(QFWittError):
    pass


class WrongAdim(QFWittError):
    pass


class LoopBudgetExceeded(QFWittError):
    pass


class InternalError(QFWittError):
    """A self-check failed. Indicates a bug, never a user error."""
