"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class TransmonError(Exception):
    exit_code = 1


class InvalidParameterError(TransmonError, ValueError):
    exit_code = 4


class NoSolutionError(InvalidParameterError):
    pass


class ResonantRegimeError(InvalidParameterError):
    """Qubit and cavity too close in frequency for the dispersive formulas."""


class NumericFailureError(TransmonError, ArithmeticError):
    exit_code = 5


class FitError(NumericFailureError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class IllConditionedError(FitError):
    pass


class ParseError(TransmonError, ValueError):
    exit_code = 3

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column!r})" if column is not None else ")")
        super().__init__(message + loc)
        self.line = line
        self.column = column


class ValidationError(TransmonError, ValueError):
    exit_code = 4
