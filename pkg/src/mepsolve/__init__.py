"""Multiparameter eigenvalue formulation and solvers for the realization problem."""
from src.mepsolve.matrix_polynomial import (
    MatrixPolynomial,
    assemble_direct,
    build_matrix_polynomial,
    monomials
)
from src.mepsolve.spectrum import AffineSpectrum
from src.mepsolve.univariate import linearize, solve_univariate
from src.mepsolve.macaulay import BlockMacaulay, build_block_macaulay, solve_block_macaulay
from src.mepsolve.realization import CriticalPoint, RealizationResult, realize

__all__ = [
    "MatrixPolynomial",
    "assemble_direct",
    "build_matrix_polynomial",
    "monomials",
    "AffineSpectrum",
    "linearize",
    "solve_univariate",
    "BlockMacaulay",
    "build_block_macaulay",
    "solve_block_macaulay",
    "CriticalPoint",
    "RealizationResult",
    "realize"
]
