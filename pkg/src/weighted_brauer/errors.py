"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class WeightedBrauerError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(WeightedBrauerError, ValueError):
    """Raised when a caller hands in data outside an operation's domain.

    The CLI reports these with exit code 1.
    """


class ConstructionError(WeightedBrauerError, RuntimeError):
    """Raised when an internal invariant breaks (bad witness, failed lift, ...).

    The CLI reports these with exit code 2.
    """
