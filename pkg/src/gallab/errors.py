"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """A parameter violates an operation's precondition."""


class OutOfRange(InvalidArgument):
    """An index lies outside a truncation bound."""


class SetParseError(ValueError):
    """A set file contains a line that is not a natural number."""

    def __init__(self, lineno, line):
        self.lineno = lineno
        self.line = line
        super().__init__(f"line {lineno}: cannot parse {line!r} as a natural number")


class ProductOverflowError(OverflowError):
    """A product key would not fit in a signed 128-bit integer."""
