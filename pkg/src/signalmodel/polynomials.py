"""
Polynomial arithmetic and root/coefficient conversions for shift polynomials.
"""
import logging
from typing import List, Optional

import numpy as np

from src.config import settings
from src.errors import InvalidInputError
from src.signalmodel.types import FixedPoleSet, ModelPoly, PolyLike, as_poly

# Configure module logger
logger = logging.getLogger(__name__)


def poly_mul(p: PolyLike, r: PolyLike) -> ModelPoly:
    """Product of two shift polynomials (coefficient convolution)."""
    return ModelPoly(np.convolve(as_poly(p).coeffs, as_poly(r).coeffs))


def poly_from_roots(roots: FixedPoleSet, tol: Optional[float] = None) -> ModelPoly:
    """
    Monic real polynomial ``prod(z - rho_i)`` of a conjugate-closed root set.

    Args:
        roots: The poles rho_1 ... rho_m
        tol: Relative tolerance on the imaginary residue of the coefficients

    Returns:
        Degree-m ModelPoly; ``[1]`` for the empty set

    Raises:
        InvalidInputError: the set is not closed under conjugation
    """
    if not isinstance(roots, FixedPoleSet):
        roots = FixedPoleSet(tuple(roots))
    if roots.m == 0:
        return ModelPoly.unit()

    tol = settings.conjugate_tol if tol is None else tol
    poles = np.array(roots.poles, dtype=complex)
    descending = np.atleast_1d(np.poly(poles))

    scale = (1.0 + np.max(np.abs(poles))) ** roots.m
    residue = float(np.max(np.abs(descending.imag)))
    if residue > tol * scale:
        raise InvalidInputError(
            f"Pole set is not closed under complex conjugation "
            f"(imaginary residue {residue:.3e})"
        )
    return ModelPoly(descending.real[::-1].copy())


def poly_roots(p: PolyLike) -> List[complex]:
    """
    All complex roots of a shift polynomial, from companion-matrix eigenvalues.

    Roots are returned sorted by real part, then imaginary part.
    """
    p = as_poly(p)
    if p.leading == 0.0:
        raise InvalidInputError("Cannot compute roots: leading coefficient is zero")
    if p.degree == 0:
        return []

    roots = np.roots(p.coeffs[::-1])
    return sorted((complex(r) for r in roots), key=lambda r: (r.real, r.imag))


def vandermonde(pole: complex, length: int) -> np.ndarray:
    """Vandermonde vector ``[1, rho, ..., rho**(length-1)]`` of one pole."""
    return np.power(complex(pole), np.arange(length))
