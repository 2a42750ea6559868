"""Exception types raised by the matching pipeline."""


class FriendMatchError(Exception):
    """Base class for all errors raised by this package."""


class EmptyName(FriendMatchError):
    """A name normalized to the empty string."""


class EmptyCorpus(FriendMatchError):
    """A profile stream yielded no profiles."""


class DuplicateId(FriendMatchError):
    """Two profiles of the same network share an id."""


class ParseError(FriendMatchError):
    """An input file is malformed.

    Carries the path and 1-based line number of the offending record.
    """

    def __init__(self, message: str, path: str = "", line: int = 0):
        self.path = path
        self.line = line
        if path or line:
            message = f"{path}:{line}: {message}"
        super().__init__(message)


class ConfigError(FriendMatchError):
    """A configuration key is unknown or its value is out of range."""


class SpecError(FriendMatchError):
    """A synthetic-corpus specification is inconsistent."""
