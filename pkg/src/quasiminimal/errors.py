"""Exception hierarchy shared by every module."""


class QuasiminimalError(Exception):
    """Base class for all library errors."""


class ParseError(QuasiminimalError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)
        self.line = line
        self.column = column


class AlphabetError(QuasiminimalError, ValueError):
    pass


class BudgetExceeded(QuasiminimalError):
    """A declared cap was hit; the CLI maps this to exit code 2."""

    def __init__(self, what, cap):
        super().__init__(f"{what} exceeds cap {cap}")
        self.what = what
        self.cap = cap


class NotAFactor(QuasiminimalError, ValueError):
    pass


class NotInLanguage(QuasiminimalError, ValueError):
    pass


class UnresolvedRepresentative(QuasiminimalError, KeyError):
    pass


class HypothesisViolation(QuasiminimalError):
    pass


class ConfigError(QuasiminimalError, ValueError):
    pass
