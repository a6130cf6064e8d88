"""Exception hierarchy shared across the toolkit."""


class MisinfoError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(MisinfoError):
    """Input violates an invariant or precondition (CLI exit code 1)."""


class DataFormatError(MisinfoError):
    """A file could not be read or parsed (CLI exit code 2)."""


class ConflictError(MisinfoError):
    """A write collides with an already-stored record (HTTP 409)."""
