"""Exception hierarchy shared by the library and the CLI.

Library code raises these; only amalgam.py catches them and maps
``exit_code`` to the process exit status.
"""


class AmalgamError(ValueError):
    """Base class for every error the engine raises on bad input."""

    exit_code = 3


class UnsupportedLevel(AmalgamError):
    """A syllable references a level above the instance's cap."""


class PreconditionViolated(AmalgamError):
    """An operation was called outside its hypotheses.

    ``hypothesis`` names the failed condition so the CLI can report it.
    """

    def __init__(self, message: str, hypothesis: str = ""):
        super().__init__(message)
        self.hypothesis = hypothesis


class InvalidParams(AmalgamError):
    """Instance parameters violate the factor-system axioms."""


class IncompatibleHom(AmalgamError):
    """Levelwise maps disagree on an amalgamated subgroup."""


class IdentityInput(AmalgamError):
    """A witness generator was handed the identity element."""


class RetryExhausted(AmalgamError):
    """Witness construction kept landing in a forbidden base subgroup."""


class WordSyntaxError(AmalgamError):
    """Malformed word expression."""

    exit_code = 2

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class LiteralError(AmalgamError):
    """A factor literal does not denote an element of the instance."""

    exit_code = 2


class VerificationFailed(AmalgamError):
    """A certificate failed replay."""

    exit_code = 4
