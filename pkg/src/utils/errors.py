"""Error vocabulary shared by every package.

Each error subclasses the builtin that callers would naturally catch, so
``except ValueError`` still works around a ``DomainError``.
"""

from __future__ import annotations

import numpy as np


class DomainError(ValueError):
    """Input outside the domain of an operation (range, length, duplicates)."""


class FactorizationError(np.linalg.LinAlgError):
    """A factorization met a non-positive or vanishing pivot.

    ``route`` names the linear system that failed, e.g. ``"DB"`` for the
    DB-spline normal equations.
    """

    def __init__(self, message: str, route: str | None = None):
        if route is not None:
            message = f"[{route}] {message}"
        super().__init__(message)
        self.route = route


class UnsupportedError(NotImplementedError):
    """Variant deliberately not implemented."""


class ConvergenceWarning(UserWarning):
    """An iterative solver stopped at its iteration cap."""
