"""
Banded Toeplitz and Hankel matrices built from model polynomials and signals.

``toeplitz(a, k) @ y`` applies the difference equation ``a(z) y_k`` to every
window of ``y``; ``hankel(y, n + 1) @ a`` gives the same vector.
"""
import numpy as np
import scipy.linalg

from src.errors import InvalidInputError
from src.signalmodel.types import PolyLike, SignalLike, as_poly, as_values


def toeplitz(p: PolyLike, rows: int) -> np.ndarray:
    """
    Banded Toeplitz operator of a shift polynomial.

    Args:
        p: Generator polynomial, coefficients ``[p_d ... p_0]``
        rows: Number of rows k

    Returns:
        Array of shape ``(k, k + d)``; row r holds the coefficients in
        columns r ... r + d.
    """
    p = as_poly(p)
    if rows < 1:
        raise InvalidInputError(f"Toeplitz operator needs rows >= 1, got {rows}")

    matrix = np.zeros((rows, rows + p.degree))
    diag = np.arange(rows)
    for offset, coeff in enumerate(p.coeffs):
        matrix[diag, diag + offset] = coeff
    return matrix


def hankel(s: SignalLike, cols: int) -> np.ndarray:
    """
    Hankel matrix with ``cols`` columns: entry (i, j) is ``s[i + j]``.

    Args:
        s: Source samples, length N
        cols: Number of columns, at most N

    Returns:
        Array of shape ``(N - cols + 1, cols)``
    """
    values = as_values(s)
    n_samples = values.size
    if cols < 1 or cols > n_samples:
        raise InvalidInputError(
            f"Hankel matrix needs 1 <= cols <= N={n_samples}, got {cols}"
        )
    return scipy.linalg.hankel(values[:n_samples - cols + 1], values[n_samples - cols:])
