"""
First-order optimality residuals and the filtered Hankel rank diagnostics.

With ``a = b * c`` and ``mu = 0`` the stationarity conditions of the fixed
pole problem read::

    Yhat^T T(c)^T lambda             = 0     (d/db)
    yhat - y + T(b)^T T(c)^T lambda  = 0     (d/dyhat)
    T(c) T(b) yhat                   = 0     (d/dlambda)
    b^T e - 1                        = 0     (d/dmu)

and the critical points with full filtered Hankel rank have
``lambda = T_{N-2n+m}(b)^T g``.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import scipy.linalg

from src.config import settings
from src.errors import InvalidInputError
from src.optimality.projection import ProjectionResult
from src.signalmodel import as_poly, as_values, hankel, poly_mul, toeplitz
from src.signalmodel.types import PolyLike, SignalLike

# Configure module logger
logger = logging.getLogger(__name__)

BORDERLINE_LOW = 1e-10
BORDERLINE_HIGH = 1e-6


@dataclass(frozen=True)
class FoncResidual:
    """Norms of the four stationarity residuals."""

    r_b: float
    r_yhat: float
    r_lambda: float
    r_mu: float

    @property
    def max(self) -> float:
        return max(self.r_b, self.r_yhat, self.r_lambda, self.r_mu)

    def passes(self, tol: float) -> bool:
        return self.max <= tol


@dataclass(frozen=True)
class RankDiagnostic:
    """Numerical rank of the filtered Hankel matrix and its spectrum."""

    rank: int
    singular_values: List[float] = field(default_factory=list)
    borderline: bool = False


def fonc_residuals(
    b: PolyLike,
    c: PolyLike,
    y: SignalLike,
    proj: ProjectionResult,
    g: np.ndarray
) -> FoncResidual:
    """
    Evaluate the stationarity residuals at ``(b, yhat, lambda = T(b)^T g)``.

    Args:
        b: Unknown factor, degree q
        c: Fixed factor, degree m
        y: Observed data, length N
        proj: Projection supplying the model-compliant data yhat
        g: Parameter vector of length N - 2n + m

    Returns:
        FoncResidual with the 2-norms of the four residuals
    """
    b = as_poly(b)
    c = as_poly(c)
    values = as_values(y)
    yhat = proj.yhat.values
    g = np.asarray(g, dtype=float).reshape(-1)

    q, m = b.degree, c.degree
    n = q + m
    n_samples = values.size
    expected = n_samples - 2 * n + m

    if yhat.size != n_samples:
        raise InvalidInputError(
            f"Projection has {yhat.size} samples, data has {n_samples}"
        )
    if expected < 1 or g.size != expected:
        raise InvalidInputError(
            f"g must have length N - 2n + m = {expected}, got {g.size}"
        )

    t_c = toeplitz(c, n_samples - n)
    lam = toeplitz(b, expected).T @ g
    filtered_lam = t_c.T @ lam
    a = poly_mul(b, c)

    r_b = hankel(yhat, q + 1).T @ filtered_lam
    r_yhat = yhat - values + toeplitz(b, n_samples - q).T @ filtered_lam
    r_lambda = toeplitz(a, n_samples - n) @ yhat
    r_mu = b.leading - 1.0

    return FoncResidual(
        r_b=float(np.linalg.norm(r_b)),
        r_yhat=float(np.linalg.norm(r_yhat)),
        r_lambda=float(np.linalg.norm(r_lambda)),
        r_mu=abs(float(r_mu))
    )


def estimate_multipliers(b: PolyLike, c: PolyLike, proj: ProjectionResult) -> np.ndarray:
    """
    Least squares estimate of g from ``T_{N-2n+m}(b)^T g = lambda``.

    ``lambda`` is taken from the projection, so the fit is exact only at
    critical points whose filtered Hankel matrix has full rank q.
    """
    b = as_poly(b)
    c = as_poly(c)
    n = b.degree + c.degree
    n_samples = proj.yhat.N
    rows = n_samples - 2 * n + c.degree
    if rows < 1:
        raise InvalidInputError(f"N - 2n + m must be positive, got {rows}")

    g, *_ = scipy.linalg.lstsq(toeplitz(b, rows).T, proj.multipliers)
    return g


def filtered_hankel_diagnostic(
    yhat: SignalLike,
    c: PolyLike,
    q: int,
    rel_tol: Optional[float] = None
) -> RankDiagnostic:
    """
    Rank of ``Yhat' = T_{N-n}(c) hankel(yhat, q + 1)`` with its singular values.

    The threshold is ``sigma_1 * max(dims) * rel_tol``. The result is marked
    borderline when ``sigma_q / sigma_1`` falls in [1e-10, 1e-6].
    """
    c = as_poly(c)
    values = as_values(yhat)
    rel_tol = settings.rank_rel_tol if rel_tol is None else rel_tol
    n = q + c.degree
    if q < 0 or values.size <= n:
        raise InvalidInputError(f"Need 0 <= q and N > n, got q={q}, N={values.size}")

    filtered = toeplitz(c, values.size - n) @ hankel(values, q + 1)
    singular_values = scipy.linalg.svdvals(filtered)
    if singular_values.size == 0 or singular_values[0] == 0.0:
        return RankDiagnostic(rank=0, singular_values=singular_values.tolist())

    threshold = singular_values[0] * max(filtered.shape) * rel_tol
    rank = int(np.sum(singular_values > threshold))

    borderline = False
    if 1 <= q <= singular_values.size:
        ratio = singular_values[q - 1] / singular_values[0]
        borderline = bool(BORDERLINE_LOW <= ratio <= BORDERLINE_HIGH)
        if borderline:
            logger.warning(
                f"Filtered Hankel rank is borderline: sigma_q/sigma_1 = {ratio:.2e}"
            )

    return RankDiagnostic(
        rank=rank,
        singular_values=singular_values.tolist(),
        borderline=borderline
    )


def filtered_hankel_rank(yhat: SignalLike, c: PolyLike, q: int) -> int:
    """Numerical rank of the filtered Hankel matrix."""
    return filtered_hankel_diagnostic(yhat, c, q).rank
