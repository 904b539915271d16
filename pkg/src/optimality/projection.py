"""
Misfit evaluation by orthogonal projection onto the kernel of T_{N-n}(a).

For a fixed model ``a`` the best model-compliant data are the orthogonal
projection of ``y`` onto ``ker T``; the misfit is the component of ``y`` in
the row space of ``T``.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from src.config import settings
from src.errors import DegenerateModelError, InvalidInputError
from src.signalmodel import Signal, as_poly, as_values, toeplitz
from src.signalmodel.types import PolyLike, SignalLike

# Configure module logger
logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ProjectionResult:
    """Model-compliant data, misfit and Lagrange multipliers of one model."""

    yhat: Signal
    misfit: Signal
    misfit_sq: float
    multipliers: np.ndarray
    condition: float


def project_misfit(
    a: PolyLike,
    y: SignalLike,
    cond_max: Optional[float] = None
) -> ProjectionResult:
    """
    Project observed data onto the data that comply with model ``a``.

    Computes ``yhat = y - T^T (T T^T)^{-1} T y`` with ``T = toeplitz(a, N - n)``
    through a column-pivoted QR of ``T^T`` instead of an explicit inverse.

    Args:
        a: Model polynomial of degree n, nonzero leading coefficient
        y: Observed data, length N > n
        cond_max: Largest accepted condition number of ``T T^T``

    Returns:
        ProjectionResult; ``multipliers`` solves ``T^T lambda = y - yhat``

    Raises:
        DegenerateModelError: ``T T^T`` is numerically singular
    """
    a = as_poly(a)
    values = as_values(y)
    n = a.degree
    n_samples = values.size
    cond_max = settings.projection_cond_max if cond_max is None else cond_max

    if a.leading == 0.0:
        raise InvalidInputError("Model polynomial has a zero leading coefficient")
    if n_samples <= n:
        raise InvalidInputError(f"Projection needs N > n, got N={n_samples}, n={n}")

    if n == 0:
        # T is a nonzero multiple of the identity: nothing complies but zero
        zeros = np.zeros(n_samples)
        return ProjectionResult(
            yhat=Signal(zeros),
            misfit=Signal(values.copy()),
            misfit_sq=float(values @ values),
            multipliers=values / a.leading,
            condition=1.0
        )

    operator = toeplitz(a, n_samples - n)
    q_factor, r_factor, pivots = scipy.linalg.qr(
        operator.T, mode="economic", pivoting=True
    )
    condition = float(np.linalg.cond(r_factor) ** 2)
    if not np.isfinite(condition) or condition > cond_max:
        raise DegenerateModelError(
            f"Degenerate model: cond(T T^T) = {condition:.3e} exceeds {cond_max:.1e}"
        )

    coords = q_factor.T @ values
    misfit = q_factor @ coords
    yhat = values - misfit

    multipliers = np.empty(n_samples - n)
    multipliers[pivots] = scipy.linalg.solve_triangular(r_factor, coords)

    return ProjectionResult(
        yhat=Signal(yhat),
        misfit=Signal(misfit),
        misfit_sq=float(coords @ coords),
        multipliers=multipliers,
        condition=condition
    )
