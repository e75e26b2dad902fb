"""Exception hierarchy shared by all solvers."""

from __future__ import annotations


class FracSpecError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FracSpecError, ValueError):
    """A parameter lies outside the region where the method is defined."""


class SingularityError(DomainError):
    """A Caputo boundary correction is evaluated at its singular endpoint."""


class ShapeError(FracSpecError, ValueError):
    """Array lengths or grids do not match."""


class PreconditionError(FracSpecError, ValueError):
    """An input violates a documented precondition (e.g. nonzero boundary values)."""


class FormatError(FracSpecError, ValueError):
    """A coefficient file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConvergenceError(FracSpecError, RuntimeError):
    """An iterative method stopped before reaching its tolerance.

    ``iterations`` holds the number of sweeps/iterations performed and
    ``last_iterate`` the final state (an eigenvector estimate or matrix).
    """

    def __init__(self, message: str, iterations: int, last_iterate=None):
        super().__init__(f"{message} (after {iterations} iterations)")
        self.iterations = iterations
        self.last_iterate = last_iterate
