"""Exception hierarchy shared by the library and the CLI."""


class AAError(Exception):
    """Base class for all errors raised by aawrangle."""


class DomainError(AAError, ValueError):
    """A value lies outside the domain of the semiring it is used with."""


class UnknownSemiringError(AAError, KeyError):
    def __str__(self):
        return self.args[0] if self.args else "unknown semiring"


class SemiringMismatchError(AAError, ValueError):
    pass


class EmptyRangeError(AAError, ValueError):
    pass


class FormatError(AAError, ValueError):
    """Bad header or malformed data line in a triple file."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class DenseTooLargeError(AAError, ValueError):
    pass


class DenormalizeError(AAError, ValueError):
    pass


class DocumentParseError(DenormalizeError):
    """The input document is not well-formed JSON/XML."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class PivotError(AAError, ValueError):
    pass
