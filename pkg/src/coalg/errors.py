"""Exception hierarchy shared by every module."""


class CoalgError(Exception):
    pass


class DomainError(CoalgError, ValueError):
    """Carriers, domains or codomains do not line up."""


class ShapeError(CoalgError, ValueError):
    """A value does not inhabit the functor it was checked against."""


class SizeError(CoalgError):
    """An enumeration would exceed its cap.

    ``count`` is the exact number of elements that would have been produced
    (or a lower bound on it when ``exact`` is false).
    """

    def __init__(self, message, count=None, cap=None, exact=True):
        super().__init__(message)
        self.count = count
        self.cap = cap
        self.exact = exact


class ParseError(CoalgError, ValueError):
    def __init__(self, message, line=None, column=None, source=None):
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
            if column is not None:
                where += f"{column}:"
        super().__init__(f"{where} {message}" if where else message)
        self.message = message
        self.line = line
        self.column = column
        self.source = source


class ValidationError(CoalgError, ValueError):
    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state
