"""
Block Macaulay null-space solver for rectangular multiparameter eigenvalue
problems ``A(u) z = 0`` in q >= 2 unknowns.

The block Macaulay matrix of degree d stacks the copies ``u**beta A(u)``
for all ``|beta| <= d - deg A``. Its null space contains the vectors
``v(u) (x) z`` of every affine eigenvalue. Rows of the null space are grouped
per monomial degree; the first degree whose rows add no rank marks the gap
that separates the affine part from solutions at infinity. Shifting the rows
below the gap by each unknown gives a joint eigenvalue problem.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import scipy.linalg

from src.config import settings
from src.errors import ConvergenceError, InvalidInputError
from src.mepsolve.matrix_polynomial import MatrixPolynomial, Monomial, monomial_count, monomials
from src.mepsolve.spectrum import AffineSpectrum
from src.telemetry import get_tracer

# Configure module logger
logger = logging.getLogger(__name__)

tracer = get_tracer(__name__)

# Fixed weights keep the joint eigenvalue problem deterministic
_COMBINATION_SEED = 20250101


@dataclass(frozen=True, eq=False)
class BlockMacaulay:
    """Block Macaulay matrix of one degree with its monomial index maps."""

    degree: int
    matrix: np.ndarray
    row_monomials: List[Monomial]
    col_monomials: List[Monomial]
    col_index: Dict[Monomial, int] = field(default_factory=dict)
    block_shape: Tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class GapInfo:
    """Degree below the gap and the rank of the affine part."""

    degree: int
    affine_count: int


def build_block_macaulay(mp: MatrixPolynomial, degree: int) -> BlockMacaulay:
    """
    Stack the monomial-shifted copies of ``mp`` up to total degree ``degree``.

    Block row ``beta`` holds ``block[alpha]`` in block column ``alpha + beta``.
    Block columns are ordered by degree, so the columns of degree <= delta
    form a prefix.
    """
    rows, cols = mp.shape
    shift_degree = degree - mp.degree
    if shift_degree < 0:
        raise InvalidInputError(
            f"Macaulay degree {degree} is below the polynomial degree {mp.degree}"
        )

    row_monomials = monomials(mp.var_count, shift_degree)
    col_monomials = monomials(mp.var_count, degree)
    col_index = {alpha: j for j, alpha in enumerate(col_monomials)}

    matrix = np.zeros((len(row_monomials) * rows, len(col_monomials) * cols))
    for i, beta in enumerate(row_monomials):
        for alpha, block in mp.blocks.items():
            target = tuple(a + b for a, b in zip(alpha, beta))
            j = col_index[target]
            matrix[i * rows:(i + 1) * rows, j * cols:(j + 1) * cols] = block

    return BlockMacaulay(
        degree=degree,
        matrix=matrix,
        row_monomials=row_monomials,
        col_monomials=col_monomials,
        col_index=col_index,
        block_shape=(rows, cols)
    )


def _numerical_rank(singular_values: np.ndarray, rel_tol: float) -> int:
    if singular_values.size == 0 or singular_values[0] == 0.0:
        return 0
    return int(np.sum(singular_values > rel_tol * singular_values[0]))


def null_space(matrix: np.ndarray, rel_tol: float):
    """
    Orthonormal null-space basis from a full SVD.

    Returns:
        Tuple ``(basis, rank, gap_ratio)``; ``gap_ratio`` is
        ``sigma_rank / sigma_{rank+1}`` (inf when no small singular value exists)
    """
    _, singular_values, vt = scipy.linalg.svd(matrix, full_matrices=True)
    rank = _numerical_rank(singular_values, rel_tol)
    if 0 < rank < singular_values.size and singular_values[rank] > 0.0:
        gap_ratio = float(singular_values[rank - 1] / singular_values[rank])
    else:
        gap_ratio = float("inf")
    return vt[rank:].T, rank, gap_ratio


def rank_profile(basis: np.ndarray, var_count: int, degree: int, block_cols: int,
                 rel_tol: float) -> List[int]:
    """Rank of the null-space rows of degree <= delta, for delta = 0 ... degree."""
    profile = []
    for delta in range(degree + 1):
        prefix = monomial_count(var_count, delta) * block_cols
        rows = basis[:prefix]
        if rows.size == 0:
            profile.append(0)
            continue
        profile.append(_numerical_rank(scipy.linalg.svdvals(rows), rel_tol))
    return profile


def increment_stable(history: List[Tuple[int, int]]) -> bool:
    """True once the nullity grew by the same amount over the last two degrees."""
    if len(history) < 3:
        return False
    (_, first), (_, second), (_, third) = history[-3:]
    return third - second == second - first


def find_gap(profile: List[int]) -> Optional[GapInfo]:
    """First degree whose next degree block adds no rank."""
    for delta in range(len(profile) - 1):
        if profile[delta + 1] == profile[delta]:
            return GapInfo(degree=delta, affine_count=profile[delta])
    return None


def extract_solutions(basis: np.ndarray, mp: MatrixPolynomial, gap: GapInfo,
                      rel_tol: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Solve the shift problems below the gap.

    Returns:
        Tuple ``(eigenvalues, vectors)`` with shapes (count, q) and (l, count)
    """
    q = mp.var_count
    block_cols = mp.shape[1]
    count = gap.affine_count
    if count == 0:
        return np.zeros((0, q), dtype=complex), np.zeros((block_cols, 0), dtype=complex)

    low = monomial_count(q, gap.degree) * block_cols
    high = monomial_count(q, gap.degree + 1) * block_cols

    # Column compression onto the affine part
    _, _, vt = scipy.linalg.svd(basis[:low], full_matrices=False)
    compressed = basis[:high] @ vt[:count].T

    index = {alpha: j for j, alpha in enumerate(monomials(q, gap.degree + 1))}
    base_rows = np.arange(low)
    shifted = []
    for var in range(q):
        rows = []
        for alpha in monomials(q, gap.degree):
            raised = list(alpha)
            raised[var] += 1
            start = index[tuple(raised)] * block_cols
            rows.extend(range(start, start + block_cols))
        shifted.append(np.array(rows))

    base = compressed[base_rows]
    shift_maps = [
        scipy.linalg.lstsq(base, compressed[rows])[0] for rows in shifted
    ]

    weights = np.random.default_rng(_COMBINATION_SEED).uniform(0.5, 1.5, size=q)
    combined = sum(w * shift_map for w, shift_map in zip(weights, shift_maps))
    _, eigvecs = scipy.linalg.eig(combined)

    eigenvalues = np.empty((count, q), dtype=complex)
    for var, shift_map in enumerate(shift_maps):
        eigenvalues[:, var] = np.diag(np.linalg.solve(eigvecs, shift_map @ eigvecs))

    vectors = (base @ eigvecs)[:block_cols]
    return eigenvalues, vectors


def solve_block_macaulay(
    mp: MatrixPolynomial,
    max_degree: Optional[int] = None,
    rank_tol: Optional[float] = None,
    gap_ratio_min: Optional[float] = None
) -> AffineSpectrum:
    """
    All affine eigenvalues of a (rectangular) multiparameter eigenvalue problem.

    The degree grows from ``deg A`` until the nullity increment is the same
    for two consecutive degrees and a degree block of the null space adds no
    rank.

    Args:
        mp: Matrix polynomial with q >= 2 unknowns
        max_degree: Largest Macaulay degree to try
        rank_tol: Relative singular-value threshold for numerical rank
        gap_ratio_min: Singular-value ratio under which a rank decision is
            reported as ambiguous

    Returns:
        AffineSpectrum with eigenvalues of shape (count, q)

    Raises:
        ConvergenceError: no stable gap up to ``max_degree``
    """
    if mp.var_count < 2:
        raise InvalidInputError(f"Block Macaulay solver needs q >= 2, got q={mp.var_count}")

    max_degree = settings.macaulay_max_degree if max_degree is None else max_degree
    rank_tol = settings.macaulay_rank_tol if rank_tol is None else rank_tol
    gap_ratio_min = settings.macaulay_gap_ratio if gap_ratio_min is None else gap_ratio_min

    with tracer.start_as_current_span("solve_block_macaulay") as span:
        span.set_attribute("q", mp.var_count)
        history: List[Tuple[int, int]] = []
        warnings: List[str] = []

        for degree in range(mp.degree, max_degree + 1):
            macaulay = build_block_macaulay(mp, degree)
            basis, rank, gap_ratio = null_space(macaulay.matrix, rank_tol)
            nullity = basis.shape[1]
            history.append((degree, nullity))
            span.set_attribute(f"nullity.d{degree}", nullity)

            if gap_ratio < gap_ratio_min:
                message = (
                    f"Ambiguous rank at degree {degree}: "
                    f"singular value ratio {gap_ratio:.2e} below {gap_ratio_min:.0e}"
                )
                logger.warning(message)
                warnings.append(message)

            profile = rank_profile(basis, mp.var_count, degree, mp.shape[1], rank_tol)
            gap = find_gap(profile)
            logger.debug(
                f"Macaulay degree {degree}: size {macaulay.matrix.shape}, "
                f"nullity {nullity}, profile {profile}, gap {gap}"
            )

            if gap is not None and increment_stable(history):
                eigenvalues, vectors = extract_solutions(basis, mp, gap, rank_tol)
                span.set_attribute("affine", len(eigenvalues))
                span.set_attribute("degree", degree)
                logger.info(
                    f"Block Macaulay converged at degree {degree}: "
                    f"{gap.affine_count} affine solutions"
                )
                return AffineSpectrum(
                    eigenvalues=eigenvalues,
                    vectors=vectors,
                    n_infinite=nullity - gap.affine_count,
                    nullity_history=history,
                    warnings=warnings
                )

        raise ConvergenceError(
            f"Block Macaulay matrix reached degree {max_degree} without a stable gap",
            nullity_history=history
        )
