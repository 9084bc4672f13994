"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: input errors exit 1, resource errors
exit 2 and network errors exit 3.
"""


class RobustPHError(Exception):
    """Base class for all package errors."""


class InputError(RobustPHError, ValueError):
    """Invalid user input (malformed data, violated preconditions)."""


class ParseError(InputError):
    """A file could not be parsed.

    Parameters
    ----------
    message : str
        What went wrong.
    lineno : int, optional
        1-based line number of the offending line.
    """

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ResourceError(RobustPHError, RuntimeError):
    """A computation would exceed a configured size budget."""


class NetworkError(RobustPHError, OSError):
    """A retryable network or HTTP failure."""


class DataError(RobustPHError):
    """Downloaded or loaded data failed a sanity check."""
