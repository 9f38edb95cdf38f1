"""Exception hierarchy shared by the library and the CLI."""


class CoreGamesError(Exception):
    """Base class for all errors raised by coregames."""

    exit_code = 2


class MalformedInputError(CoreGamesError, ValueError):
    """Input does not satisfy the documented structure.

    ``code`` is a short stable identifier (e.g. ``"zero-denominator"``) so
    callers can tell failure causes apart without parsing messages.
    """

    def __init__(self, message: str, code: str = "malformed"):
        super().__init__(message)
        self.code = code


class ContractError(CoreGamesError):
    """A precondition of an operation was violated by the caller."""

    code = "contract"


class ResourceBoundError(CoreGamesError):
    """An exhaustive routine was asked to run above its configured size bound."""

    exit_code = 3
    code = "resource-bound"
