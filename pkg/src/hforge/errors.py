"""Error types shared by all modules."""


class HforgeError(Exception):
    """Base class."""


class InputError(HforgeError, ValueError):
    """Malformed or inconsistent input (CLI exit code 2)."""


class ResourceError(HforgeError, RuntimeError):
    """An enumeration bound would be exceeded."""


class ConsistencyError(HforgeError, AssertionError):
    """Two independent computations of the same object disagree (exit code 1)."""
