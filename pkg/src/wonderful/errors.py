"""Exception hierarchy shared by the library and the command line."""


class WonderfulError(Exception):
    """Base class for every error raised by this package."""


class InputError(WonderfulError, ValueError):
    """Malformed or inconsistent input (bad shapes, wrong lattice, ...)."""


class UnsupportedError(WonderfulError):
    """A valid request outside the supported range (type, rank, size)."""


class CapExceededError(UnsupportedError):
    """An enumeration would exceed its configured cap."""


class InvariantViolation(WonderfulError, AssertionError):
    """An internal consistency check failed."""
