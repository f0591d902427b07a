"""Exception types shared across the package."""


class CapabilityError(RuntimeError):
    """Raised when an exact computation would exceed a configured size cap.

    The library refuses instead of approximating; the CLI maps this to exit code 2.
    """


class Refused(ValueError):
    """Raised when a construction's precondition does not hold."""
