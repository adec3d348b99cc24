"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input violates an operation's preconditions."""


class NumericError(ArithmeticError):
    """A numerical routine failed to converge or hit a degenerate case."""


class DataFormatError(ValidationError):
    """A data file could not be parsed."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)
