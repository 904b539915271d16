"""
Levenberg-Marquardt polishing of real eigenvalues on the square system
``A(u) [1; g_hat] = 0`` in the unknowns ``(u, g_hat)``.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from src.mepsolve.matrix_polynomial import MatrixPolynomial

# Configure module logger
logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PolishResult:
    unknowns: np.ndarray
    g_hat: np.ndarray
    residual: float
    accepted: bool


def system_residual(mp: MatrixPolynomial, u: np.ndarray, g_hat: np.ndarray) -> float:
    """Norm of ``A(u) [1; g_hat]``."""
    return float(np.linalg.norm(mp.evaluate(u) @ np.concatenate([[1.0], g_hat])))


def polish(mp: MatrixPolynomial, u0: np.ndarray, g0: np.ndarray, max_step: float) -> PolishResult:
    """
    Refine a real eigenvalue and its kernel vector.

    The refined point is accepted only when it moves u by at most
    ``max_step`` (infinity norm) and lowers the residual.

    Args:
        mp: The matrix polynomial
        u0: Real eigenvalue estimate, length q
        g0: Real kernel estimate ``z[1:] / z[0]``, length l - 1
        max_step: Largest accepted change of u

    Returns:
        PolishResult; the starting point when the refinement is rejected
    """
    q = mp.var_count
    u0 = np.asarray(u0, dtype=float)
    g0 = np.asarray(g0, dtype=float)
    start_residual = system_residual(mp, u0, g0)

    def fun(x):
        return mp.evaluate(x[:q]) @ np.concatenate([[1.0], x[q:]])

    def jac(x):
        u, g_hat = x[:q], x[q:]
        z = np.concatenate([[1.0], g_hat])
        columns = [mp.derivative(var, u) @ z for var in range(q)]
        return np.column_stack(columns + [mp.evaluate(u)[:, 1:]])

    try:
        solution = least_squares(
            fun, np.concatenate([u0, g0]), jac=jac, method="lm",
            xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=100
        )
    except (ValueError, np.linalg.LinAlgError) as e:
        logger.debug(f"Polishing failed at u={u0}: {e}")
        return PolishResult(u0, g0, start_residual, accepted=False)

    u, g_hat = solution.x[:q], solution.x[q:]
    residual = system_residual(mp, u, g_hat)
    step = float(np.max(np.abs(u - u0)))
    if step <= max_step and residual <= start_residual:
        return PolishResult(u, g_hat, residual, accepted=True)

    logger.debug(
        f"Polishing rejected at u={u0}: step {step:.2e}, "
        f"residual {start_residual:.2e} -> {residual:.2e}"
    )
    return PolishResult(u0, g0, start_residual, accepted=False)
