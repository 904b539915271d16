"""
The cubic matrix polynomial whose rank drops characterize the critical points.

For ``a = c * b`` with monic ``b`` (``b_0 = 1``) and unknowns
``u = (b_1, ..., b_q)``::

    A(u) = [ T_{N-n}(a) y ,  T_{N-n}(a) T_{N-n}(a)^T T_{N-2n+m}(b)^T ]

of shape ``(N - n) x (N - 2n + m + 1)``. Each real u where ``A(u)`` loses
column rank, with kernel vector ``z = [1; g_hat]``, is a critical point of
the fixed pole least squares problem with ``g = -g_hat``.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from src.errors import InvalidInputError
from src.signalmodel import ModelPoly, as_poly, as_values, poly_mul, toeplitz
from src.signalmodel.types import PolyLike, SignalLike

# Configure module logger
logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]


def monomials(var_count: int, degree: int) -> List[Monomial]:
    """Exponent vectors of total degree <= ``degree``, graded by degree."""
    result = []
    for total in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(var_count), total):
            exponents = [0] * var_count
            for var in combo:
                exponents[var] += 1
            result.append(tuple(exponents))
    return result


def monomial_count(var_count: int, degree: int) -> int:
    """Number of monomials in ``var_count`` variables of degree <= ``degree``."""
    if degree < 0:
        return 0
    count = 1
    for i in range(1, var_count + 1):
        count = count * (degree + i) // i
    return count


@dataclass(frozen=True, eq=False)
class MatrixPolynomial:
    """Multivariate matrix polynomial stored as coefficient blocks per monomial."""

    var_count: int
    blocks: Dict[Monomial, np.ndarray]

    @property
    def shape(self) -> Tuple[int, int]:
        return next(iter(self.blocks.values())).shape

    @property
    def degree(self) -> int:
        return max(sum(alpha) for alpha in self.blocks)

    def evaluate(self, u: Sequence) -> np.ndarray:
        """Sum of ``u**alpha * block[alpha]``; complex u is allowed."""
        u = np.asarray(u).reshape(-1)
        dtype = np.result_type(u.dtype, float)
        result = np.zeros(self.shape, dtype=dtype)
        for alpha, block in self.blocks.items():
            result = result + np.prod(u ** np.array(alpha)) * block
        return result

    def derivative(self, var: int, u: Sequence) -> np.ndarray:
        """Partial derivative with respect to ``u[var]``, evaluated at u."""
        u = np.asarray(u).reshape(-1)
        dtype = np.result_type(u.dtype, float)
        result = np.zeros(self.shape, dtype=dtype)
        for alpha, block in self.blocks.items():
            power = alpha[var]
            if power == 0:
                continue
            lowered = np.array(alpha)
            lowered[var] -= 1
            result = result + power * np.prod(u ** lowered) * block
        return result

    def block(self, alpha: Monomial) -> np.ndarray:
        """Coefficient block of ``alpha`` (zeros when absent)."""
        if alpha in self.blocks:
            return self.blocks[alpha]
        return np.zeros(self.shape)


def validate_problem(n_samples: int, n: int, m: int) -> None:
    """Shared precondition check for the realization problem sizes."""
    if n < 1:
        raise InvalidInputError(f"Model order must be at least 1, got n={n}")
    if m < 0 or m >= n:
        raise InvalidInputError(f"Need 0 <= m < n fixed poles, got m={m}, n={n}")
    if n_samples <= 2 * n:
        raise InvalidInputError(f"Need N > 2n data points, got N={n_samples}, n={n}")


def assemble_direct(y: SignalLike, c: PolyLike, b: PolyLike) -> np.ndarray:
    """Assemble ``A`` directly from its Toeplitz definition at a given b."""
    values = as_values(y)
    c = as_poly(c)
    b = as_poly(b)
    n = b.degree + c.degree
    n_samples = values.size
    a = poly_mul(b, c)
    t_a = toeplitz(a, n_samples - n)
    t_b = toeplitz(b, n_samples - 2 * n + c.degree)
    return np.column_stack([t_a @ values, t_a @ t_a.T @ t_b.T])


def build_matrix_polynomial(y: SignalLike, c: PolyLike, q: int) -> MatrixPolynomial:
    """
    Expand ``A(u)`` into coefficient blocks.

    Args:
        y: Observed data, length N
        c: Fixed factor of degree m (``[1]`` for the standard problem)
        q: Degree of the unknown factor, q = n - m

    Returns:
        MatrixPolynomial in q variables of total degree 3
    """
    values = as_values(y)
    c = as_poly(c)
    m = c.degree
    n = q + m
    n_samples = values.size
    validate_problem(n_samples, n, m)

    rows = n_samples - n
    inner = n_samples - 2 * n + m

    # b = e_q + sum_i u_i e_{q-i}; index 0 is the constant (b_0 = 1) part
    b_parts = []
    for i in range(q + 1):
        coeffs = np.zeros(q + 1)
        coeffs[q - i] = 1.0
        b_parts.append(ModelPoly(coeffs))

    t_a = [toeplitz(poly_mul(c, part), rows) for part in b_parts]
    t_b = [toeplitz(part, inner) for part in b_parts]

    def unit(*indices: int) -> Monomial:
        exponents = [0] * q
        for index in indices:
            if index > 0:
                exponents[index - 1] += 1
        return tuple(exponents)

    blocks: Dict[Monomial, np.ndarray] = {}

    def accumulate(alpha: Monomial, column: slice, value: np.ndarray) -> None:
        if alpha not in blocks:
            blocks[alpha] = np.zeros((rows, inner + 1))
        blocks[alpha][:, column] += value

    for i in range(q + 1):
        accumulate(unit(i), slice(0, 1), (t_a[i] @ values)[:, None])

    gram = {}
    for i in range(q + 1):
        for j in range(i, q + 1):
            gram[i, j] = t_a[i] @ t_a[j].T

    for i in range(q + 1):
        for j in range(q + 1):
            product = gram[i, j] if i <= j else gram[j, i].T
            for k in range(q + 1):
                accumulate(unit(i, j, k), slice(1, None), product @ t_b[k].T)

    logger.debug(
        f"Matrix polynomial: q={q}, shape={rows}x{inner + 1}, {len(blocks)} blocks"
    )
    return MatrixPolynomial(var_count=q, blocks=blocks)
