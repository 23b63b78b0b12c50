"""Exception types shared across the package."""

from __future__ import annotations


class ParameterError(ValueError):
    """Invalid input parameters (non-prime p, m = 0, length mismatch, ...)."""


class ResourceError(RuntimeError):
    """A configured budget (enumeration size, search nodes, vertices) was exceeded.

    ``bounds`` carries whatever partial information the operation had when it
    stopped, e.g. ``{"lower": 3, "upper": 5}`` for the chromatic solver.
    """

    def __init__(self, message: str, **bounds):
        super().__init__(message)
        self.bounds = bounds


class UnsupportedInputError(ParameterError):
    """The input is valid in principle but cannot be handled exactly."""


class InvariantViolation(RuntimeError):
    """An internal invariant failed; indicates a construction bug."""


class BoostFailure(RuntimeError):
    """The randomized booster exhausted its retries."""

    def __init__(self, message: str, attempts: list[dict]):
        super().__init__(message)
        self.attempts = attempts
