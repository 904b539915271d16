"""
Globally optimal least squares realization with optional fixed poles.

``realize`` enumerates the real affine eigenvalues of the cubic matrix
polynomial, turns each into a critical point of the (fixed pole) least
squares realization problem and ranks them by misfit. With an empty pole set
this is the standard problem.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg

from src.config import settings
from src.errors import DegenerateModelError, NoRealSolutionError
from src.mepsolve.macaulay import solve_block_macaulay
from src.mepsolve.matrix_polynomial import (
    MatrixPolynomial,
    build_matrix_polynomial,
    validate_problem
)
from src.mepsolve.refinement import polish
from src.mepsolve.spectrum import AffineSpectrum
from src.mepsolve.univariate import solve_univariate
from src.optimality import (
    FoncResidual,
    estimate_multipliers,
    filtered_hankel_diagnostic,
    fonc_residuals,
    project_misfit
)
from src.signalmodel import (
    FixedPoleSet,
    ModelPoly,
    Signal,
    as_values,
    poly_from_roots,
    poly_mul,
    poly_roots
)
from src.signalmodel.types import SignalLike
from src.telemetry import get_tracer

# Configure module logger
logger = logging.getLogger(__name__)

tracer = get_tracer(__name__)


@dataclass(frozen=True, eq=False)
class CriticalPoint:
    """One real affine eigenvalue turned into a critical point."""

    b: ModelPoly
    a: ModelPoly
    poles: List[complex]
    yhat: Signal
    misfit_sq: float
    fonc: FoncResidual
    is_real_affine: bool
    g: np.ndarray
    g_discrepancy: float
    hankel_rank: int
    rank_borderline: bool
    rank_drop: float
    polished: bool

    @property
    def unknowns(self) -> np.ndarray:
        return self.b.unknowns

    @property
    def hankel_rank_full(self) -> bool:
        """Filtered Hankel rank equals the number of free poles."""
        return self.hankel_rank == self.b.degree


@dataclass(frozen=True, eq=False)
class RealizationResult:
    """Critical points sorted by misfit; index 0 is the global minimizer."""

    candidates: List[CriticalPoint]
    n_affine: int
    n_real: int
    n_infinite: int
    n: int
    fixed: FixedPoleSet
    c: ModelPoly
    solver: str
    eigenvalues: np.ndarray
    global_index: int = 0
    nullity_history: List[Tuple[int, int]] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def best(self) -> CriticalPoint:
        return self.candidates[self.global_index]

    @property
    def q(self) -> int:
        return self.n - self.fixed.m


def is_real(eigenvalue: np.ndarray, tol: float) -> bool:
    """``|Im b_i| <= tol (1 + |Re b_i|)`` for every component."""
    return bool(np.all(np.abs(eigenvalue.imag) <= tol * (1.0 + np.abs(eigenvalue.real))))


def deduplicate(points: List[np.ndarray], tol: float) -> List[int]:
    """Indices of the points kept after dropping near-duplicates (inf-norm)."""
    kept: List[int] = []
    for i, point in enumerate(points):
        if all(np.max(np.abs(point - points[j])) >= tol for j in kept):
            kept.append(i)
    return kept


def kernel_estimate(mp: MatrixPolynomial, u: np.ndarray, vector: np.ndarray) -> np.ndarray:
    """``g_hat`` from the eigenvector, or by least squares if ``z_0`` vanishes."""
    if abs(vector[0]) > 1e-12 * np.linalg.norm(vector):
        return np.real(vector[1:] / vector[0])
    matrix = mp.evaluate(u)
    g_hat, *_ = scipy.linalg.lstsq(matrix[:, 1:], -matrix[:, 0])
    return g_hat


def solve_spectrum(mp: MatrixPolynomial, max_degree: Optional[int] = None) -> Tuple[AffineSpectrum, str]:
    """Dispatch to the univariate or block Macaulay solver."""
    if mp.var_count == 1:
        return solve_univariate(mp), "companion"
    return solve_block_macaulay(mp, max_degree=max_degree), "block-macaulay"


def build_candidate(
    mp: MatrixPolynomial,
    values: np.ndarray,
    c: ModelPoly,
    u: np.ndarray,
    g_hat: np.ndarray,
    polished: bool
) -> CriticalPoint:
    """Assemble a CriticalPoint from real unknowns and the kernel estimate."""
    b = ModelPoly.monic(u)
    a = poly_mul(b, c)
    proj = project_misfit(a, values)

    g_eigen = -g_hat
    g = estimate_multipliers(b, c, proj)
    g_discrepancy = float(np.linalg.norm(g - g_eigen) / (1.0 + np.linalg.norm(g)))
    fonc = fonc_residuals(b, c, values, proj, g)
    diagnostic = filtered_hankel_diagnostic(proj.yhat, c, b.degree)

    singular_values = scipy.linalg.svdvals(mp.evaluate(u))
    rank_drop = float(singular_values[-1] / singular_values[0]) if singular_values[0] > 0 else 0.0

    return CriticalPoint(
        b=b,
        a=a,
        poles=poly_roots(a),
        yhat=proj.yhat,
        misfit_sq=proj.misfit_sq,
        fonc=fonc,
        is_real_affine=True,
        g=g,
        g_discrepancy=g_discrepancy,
        hankel_rank=diagnostic.rank,
        rank_borderline=diagnostic.borderline,
        rank_drop=rank_drop,
        polished=polished
    )


def realize(
    y: SignalLike,
    n: int,
    fixed: Optional[FixedPoleSet] = None,
    max_degree: Optional[int] = None,
    polish_candidates: Optional[bool] = None
) -> RealizationResult:
    """
    Globally optimal order-n realization of ``y`` with the given fixed poles.

    Args:
        y: Observed data, length N > 2n
        n: Model order
        fixed: Fixed poles (m < n), closed under conjugation; empty by default
        max_degree: Degree cap for the block Macaulay solver (q >= 2)
        polish_candidates: Refine real eigenvalues before evaluation

    Returns:
        RealizationResult with candidates sorted by misfit

    Raises:
        InvalidInputError: N <= 2n, m >= n, or a non-conjugate-closed pole set
        NoRealSolutionError: no real affine eigenvalue was found
    """
    values = as_values(y)
    fixed = fixed or FixedPoleSet.empty()
    polish_candidates = settings.polish_candidates if polish_candidates is None else polish_candidates
    validate_problem(values.size, n, fixed.m)

    c = poly_from_roots(fixed)
    q = n - fixed.m

    with tracer.start_as_current_span("realize") as span:
        span.set_attribute("N", values.size)
        span.set_attribute("n", n)
        span.set_attribute("m", fixed.m)
        span.set_attribute("q", q)

        mp = build_matrix_polynomial(values, c, q)
        spectrum, solver = solve_spectrum(mp, max_degree)
        warnings = list(spectrum.warnings)

        real_points = []
        real_vectors = []
        for eigenvalue, vector in spectrum.pairs():
            if is_real(eigenvalue, settings.realness_tol):
                real_points.append(np.real(eigenvalue))
                real_vectors.append(vector)

        kept = deduplicate(real_points, settings.dedup_tol)
        span.set_attribute("affine", len(spectrum))
        span.set_attribute("real", len(kept))

        candidates = []
        for index in kept:
            u = real_points[index]
            g_hat = kernel_estimate(mp, u, real_vectors[index])
            polished = False
            if polish_candidates:
                refined = polish(mp, u, g_hat, max_step=settings.dedup_tol)
                u, g_hat, polished = refined.unknowns, refined.g_hat, refined.accepted
            try:
                candidates.append(build_candidate(mp, values, c, u, g_hat, polished))
            except DegenerateModelError as e:
                message = f"Skipped candidate u={u}: {e}"
                logger.warning(message)
                warnings.append(message)

        if not candidates:
            raise NoRealSolutionError(
                f"No real affine eigenvalue among {len(spectrum)} affine eigenvalues "
                f"(n={n}, m={fixed.m})",
                eigenvalues=[tuple(e) for e in spectrum.eigenvalues]
            )

        candidates.sort(key=lambda point: (point.misfit_sq, tuple(point.unknowns)))

        for point in candidates:
            if not point.fonc.passes(settings.fonc_tol * float(np.linalg.norm(values))):
                message = (
                    f"Candidate u={point.unknowns} misses the stationarity "
                    f"tolerance (max residual {point.fonc.max:.2e})"
                )
                logger.warning(message)
                warnings.append(message)
            if not point.hankel_rank_full and not point.rank_borderline:
                message = (
                    f"Candidate u={point.unknowns} has filtered Hankel rank "
                    f"{point.hankel_rank}, expected {q}"
                )
                logger.warning(message)
                warnings.append(message)

        best = candidates[0]
        span.set_attribute("misfit_sq", best.misfit_sq)
        logger.info(
            f"Realization n={n}, m={fixed.m}: {len(spectrum)} affine, "
            f"{len(kept)} real, best misfit {best.misfit_sq:.6g}"
        )

        return RealizationResult(
            candidates=candidates,
            n_affine=len(spectrum),
            n_real=len(kept),
            n_infinite=spectrum.n_infinite,
            n=n,
            fixed=fixed,
            c=c,
            solver=solver,
            eigenvalues=spectrum.eigenvalues,
            nullity_history=list(spectrum.nullity_history),
            warnings=warnings
        )
