"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: ``InputError`` -> 2,
``StabilizationError`` -> 3.
"""


class InputError(ValueError):
    """Malformed or inconsistent input (dimension mismatch, bad JSON, ...)."""


class NotMPrimaryError(InputError):
    """An ideal that must be primary to the maximal ideal is not."""


class StabilizationError(RuntimeError):
    """A finite-difference table did not stabilize before the base cap."""
