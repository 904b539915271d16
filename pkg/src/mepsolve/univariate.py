"""
Linearization of the square, univariate cubic matrix polynomial (q = 1).

The first column of ``A(b_1)`` has degree one while the other columns are
cubic, so the kernel vector ``[z_0; g]`` is linearized as
``v = [z_0; g; b_1 g; b_1**2 g]``. The resulting pencil has size
``1 + 3 (N - 2n + m) = 3 (N - n) - 2`` and its finite eigenvalues are the
affine eigenvalues of ``A``.
"""
import logging
from typing import Optional

import numpy as np
import scipy.linalg

from src.config import settings
from src.errors import DegenerateModelError, InvalidInputError
from src.mepsolve.matrix_polynomial import MatrixPolynomial
from src.mepsolve.spectrum import AffineSpectrum
from src.telemetry import get_tracer

# Configure module logger
logger = logging.getLogger(__name__)

tracer = get_tracer(__name__)

SINGULAR_PENCIL_TOL = 1e-12


def linearize(mp: MatrixPolynomial):
    """
    Build the pencil ``(A, B)`` with ``A v = b_1 B v``.

    Returns:
        Tuple ``(A, B)`` of square arrays of size ``3 (N - n) - 2``
    """
    if mp.var_count != 1:
        raise InvalidInputError(f"Univariate solver needs q = 1, got q={mp.var_count}")
    rows, cols = mp.shape
    if rows != cols:
        raise InvalidInputError(f"Univariate solver needs square blocks, got {rows}x{cols}")
    if mp.degree > 3:
        raise InvalidInputError(f"Expected a cubic matrix polynomial, got degree {mp.degree}")

    inner = cols - 1
    coeff = [mp.block((k,)) for k in range(4)]
    if np.any(coeff[2][:, 0]) or np.any(coeff[3][:, 0]):
        raise InvalidInputError("First column must be at most linear in b_1")

    f0, f1 = coeff[0][:, :1], coeff[1][:, :1]
    g0, g1, g2, g3 = (block[:, 1:] for block in coeff)

    size = 1 + 3 * inner
    pencil_a = np.zeros((size, size))
    pencil_b = np.zeros((size, size))

    # Polynomial rows
    pencil_a[:rows] = np.hstack([f0, g0, g1, g2])
    pencil_b[:rows] = -np.hstack([f1, np.zeros((rows, 2 * inner)), g3])

    # Shift rows: (b g) = b * g and (b^2 g) = b * (b g)
    eye = np.eye(inner)
    for step in range(2):
        row = rows + step * inner
        source = 1 + step * inner
        target = source + inner
        pencil_a[row:row + inner, target:target + inner] = eye
        pencil_b[row:row + inner, source:source + inner] = eye

    return pencil_a, pencil_b


def solve_univariate(mp: MatrixPolynomial, infinite_tol: Optional[float] = None) -> AffineSpectrum:
    """
    All affine eigenvalues of a square cubic matrix polynomial in one unknown.

    Args:
        mp: Matrix polynomial with q = 1 and square blocks
        infinite_tol: Eigenvalues with ``|beta| <= tol |alpha|`` count as infinite

    Returns:
        AffineSpectrum with eigenvalues of shape (count, 1)

    Raises:
        DegenerateModelError: the pencil is singular
    """
    infinite_tol = settings.infinite_tol if infinite_tol is None else infinite_tol

    with tracer.start_as_current_span("solve_univariate") as span:
        pencil_a, pencil_b = linearize(mp)
        span.set_attribute("pencil.size", pencil_a.shape[0])

        homogeneous, vectors = scipy.linalg.eig(
            pencil_a, pencil_b, right=True, homogeneous_eigvals=True
        )
        alpha, beta = homogeneous

        norm_a = np.linalg.norm(pencil_a)
        norm_b = np.linalg.norm(pencil_b)
        singular = (np.abs(alpha) <= SINGULAR_PENCIL_TOL * norm_a) & (
            np.abs(beta) <= SINGULAR_PENCIL_TOL * norm_b
        )
        if np.any(singular):
            raise DegenerateModelError(
                f"Linearization pencil is singular ({int(singular.sum())} "
                f"indeterminate eigenvalues)"
            )

        infinite = np.abs(beta) <= infinite_tol * np.abs(alpha)
        finite = ~infinite
        eigenvalues = alpha[finite] / beta[finite]
        kernel = vectors[:mp.shape[1], finite]

        order = np.lexsort((eigenvalues.imag, eigenvalues.real))
        eigenvalues = eigenvalues[order]
        kernel = kernel[:, order]

        span.set_attribute("affine", int(finite.sum()))
        span.set_attribute("infinite", int(infinite.sum()))
        logger.debug(
            f"Univariate pencil of size {pencil_a.shape[0]}: "
            f"{int(finite.sum())} affine, {int(infinite.sum())} infinite"
        )

        return AffineSpectrum(
            eigenvalues=eigenvalues.reshape(-1, 1).astype(complex),
            vectors=kernel.astype(complex),
            n_infinite=int(infinite.sum())
        )
