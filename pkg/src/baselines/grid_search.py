"""
Dense grid search plus local refinement over the monic unknown factor.

Slow but independent of the eigenvalue machinery; used as a reference for
the global minimizer on small problems.
"""
import itertools
import logging
from typing import Optional, Tuple

import numpy as np
import scipy.ndimage
from scipy.optimize import minimize

from src.baselines.prefilter import BaselineMethod, BaselineResult
from src.errors import DegenerateModelError, InvalidInputError, NoRealSolutionError
from src.optimality import project_misfit
from src.signalmodel import (
    FixedPoleSet,
    ModelPoly,
    as_values,
    poly_from_roots,
    poly_mul,
    poly_roots
)
from src.signalmodel.types import SignalLike
from src.telemetry import traced

# Configure module logger
logger = logging.getLogger(__name__)


def misfit_objective(values: np.ndarray, c: ModelPoly):
    """Misfit of ``c * monic(u)`` as a function of the unknowns u."""
    def objective(u: np.ndarray) -> float:
        try:
            return project_misfit(poly_mul(ModelPoly.monic(u), c), values).misfit_sq
        except DegenerateModelError:
            return float("inf")
    return objective


@traced("grid_refine")
def grid_refine(
    y: SignalLike,
    n: int,
    fixed: Optional[FixedPoleSet] = None,
    bounds: Tuple[float, float] = (-2.0, 2.0),
    points: int = 81,
    refine_count: int = 8
) -> BaselineResult:
    """
    Grid search over ``[lo, hi]**q`` followed by Nelder-Mead refinement of the
    lowest grid-local minima.

    Args:
        y: Observed data
        n: Model order
        fixed: Fixed poles (m < n)
        bounds: Grid range for every unknown coefficient
        points: Grid points per unknown
        refine_count: Number of local minima refined

    Returns:
        BaselineResult of the best refined point
    """
    values = as_values(y)
    fixed = fixed or FixedPoleSet.empty()
    q = n - fixed.m
    if q < 1 or values.size <= 2 * n:
        raise InvalidInputError(f"Need m < n and N > 2n, got N={values.size}, n={n}, m={fixed.m}")

    c = poly_from_roots(fixed)
    objective = misfit_objective(values, c)
    axis = np.linspace(bounds[0], bounds[1], points)

    grid = np.empty((points,) * q)
    for index in itertools.product(range(points), repeat=q):
        grid[index] = objective(axis[list(index)])

    local = (grid == scipy.ndimage.minimum_filter(grid, size=3, mode="nearest")) & np.isfinite(grid)
    starts = np.argwhere(local)
    starts = starts[np.argsort(grid[tuple(starts.T)], kind="stable")][:refine_count]
    logger.debug(f"Grid search: {len(np.argwhere(local))} local minima, refining {len(starts)}")

    best_u, best_value = None, float("inf")
    for start in starts:
        refined = minimize(
            objective, axis[start], method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000}
        )
        if refined.fun < best_value:
            best_u, best_value = refined.x, float(refined.fun)

    if best_u is None or not np.isfinite(best_value):
        raise NoRealSolutionError(
            f"Grid search found no finite misfit on [{bounds[0]}, {bounds[1]}]**{q}",
            eigenvalues=[]
        )

    b = ModelPoly.monic(best_u)
    combined = poly_mul(b, c)
    proj = project_misfit(combined, values)
    return BaselineResult(
        method=BaselineMethod.GRID,
        estimated_poles=poly_roots(b),
        combined_model=combined,
        misfit_sq=proj.misfit_sq,
        yhat=proj.yhat,
        fixed=fixed
    )
