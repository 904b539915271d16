"""Structured-matrix and polynomial primitives."""
from src.signalmodel.types import (
    Signal,
    ModelPoly,
    FixedPoleSet,
    as_values,
    as_poly
)
from src.signalmodel.structured import toeplitz, hankel
from src.signalmodel.polynomials import (
    poly_mul,
    poly_from_roots,
    poly_roots,
    vandermonde
)

__all__ = [
    "Signal",
    "ModelPoly",
    "FixedPoleSet",
    "as_values",
    "as_poly",
    "toeplitz",
    "hankel",
    "poly_mul",
    "poly_from_roots",
    "poly_roots",
    "vandermonde"
]
