"""Exception hierarchy shared by the solvers and the command-line layer."""
from typing import Optional, Sequence


class RealizationError(Exception):
    """Base class for every error raised by the toolkit."""


class InvalidInputError(RealizationError, ValueError):
    """Inputs violate a precondition (dimensions, orders, pole sets, files)."""


class DegenerateModelError(RealizationError):
    """The model or the linearization is numerically singular."""


class NoRealSolutionError(RealizationError):
    """No real affine eigenvalue was found.

    Carries the full complex eigenvalue list so callers can tell a numerical
    failure from an instance whose critical points are all complex.
    """

    def __init__(self, message: str, eigenvalues: Optional[Sequence] = None):
        super().__init__(message)
        self.eigenvalues = list(eigenvalues or [])


class ConvergenceError(RealizationError):
    """Block Macaulay iteration hit its degree cap without a stable gap."""

    def __init__(self, message: str, nullity_history: Optional[Sequence] = None):
        super().__init__(message)
        self.nullity_history = list(nullity_history or [])
