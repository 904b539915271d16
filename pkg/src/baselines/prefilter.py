"""
Heuristic prefiltering baselines for fixed poles.

* NPF (naive prefilter): fit the remaining poles to the misfit left by the
  model made of the fixed poles only.
* TSD (time-series deflation): filter the observed data with the moving
  average ``T_{N-m}(c)`` and fit the remaining poles to the filtered data.

Both report the misfit of the combined order-n model against the original
data, so they can be compared with the globally optimal result.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

import numpy as np

from src.errors import DegenerateModelError, InvalidInputError
from src.mepsolve import realize
from src.optimality import project_misfit
from src.signalmodel import (
    FixedPoleSet,
    ModelPoly,
    Signal,
    as_values,
    poly_from_roots,
    poly_mul,
    poly_roots,
    toeplitz
)
from src.signalmodel.types import SignalLike
from src.telemetry import get_tracer

# Configure module logger
logger = logging.getLogger(__name__)

tracer = get_tracer(__name__)

DEGENERATE_MISFIT = 1e-12


class BaselineMethod(str, Enum):
    NPF = "npf"
    TSD = "tsd"
    GRID = "grid"
    RECURSIVE = "recursive"


@dataclass(frozen=True, eq=False)
class BaselineResult:
    """Poles, combined model and misfit of a non-eigenvalue method."""

    method: BaselineMethod
    estimated_poles: List[complex]
    combined_model: ModelPoly
    misfit_sq: float
    yhat: Signal
    fixed: FixedPoleSet

    @property
    def poles(self) -> List[complex]:
        return poly_roots(self.combined_model)


def _check_split(values: np.ndarray, n: int, fixed: FixedPoleSet) -> None:
    if not 0 < fixed.m < n:
        raise InvalidInputError(f"Prefiltering needs 0 < m < n, got m={fixed.m}, n={n}")
    if values.size <= 2 * n:
        raise InvalidInputError(f"Need N > 2n data points, got N={values.size}, n={n}")


def _combine(method: BaselineMethod, values: np.ndarray, b_est: ModelPoly,
             c: ModelPoly, fixed: FixedPoleSet) -> BaselineResult:
    combined = poly_mul(b_est, c)
    proj = project_misfit(combined, values)
    return BaselineResult(
        method=method,
        estimated_poles=poly_roots(b_est),
        combined_model=combined,
        misfit_sq=proj.misfit_sq,
        yhat=proj.yhat,
        fixed=fixed
    )


def npf(y: SignalLike, n: int, fixed: FixedPoleSet,
        max_degree: Optional[int] = None) -> BaselineResult:
    """
    Naive prefilter: standard realization of order q on the fixed-pole misfit.

    For q > 1 the remaining poles are fitted jointly.

    Raises:
        DegenerateModelError: the fixed poles already explain the data
    """
    values = as_values(y)
    _check_split(values, n, fixed)
    c = poly_from_roots(fixed)
    q = n - fixed.m

    with tracer.start_as_current_span("npf") as span:
        span.set_attribute("n", n)
        span.set_attribute("m", fixed.m)

        residual = project_misfit(c, values).misfit.values
        if np.linalg.norm(residual) <= DEGENERATE_MISFIT * max(1.0, np.linalg.norm(values)):
            raise DegenerateModelError(
                "Fixed poles explain the data: no dynamics left to fit"
            )

        fit = realize(residual, q, max_degree=max_degree)
        result = _combine(BaselineMethod.NPF, values, fit.best.a, c, fixed)
        logger.info(
            f"NPF estimated poles {result.estimated_poles}, misfit {result.misfit_sq:.6g}"
        )
        return result


def tsd(y: SignalLike, n: int, fixed: FixedPoleSet,
        max_degree: Optional[int] = None) -> BaselineResult:
    """
    Time-series deflation: standard realization of order q on ``T_{N-m}(c) y``.
    """
    values = as_values(y)
    _check_split(values, n, fixed)
    c = poly_from_roots(fixed)
    q = n - fixed.m
    n_samples = values.size
    if n_samples - fixed.m <= 2 * q:
        raise InvalidInputError(
            f"Filtered data too short: N - m = {n_samples - fixed.m} <= 2q = {2 * q}"
        )

    with tracer.start_as_current_span("tsd") as span:
        span.set_attribute("n", n)
        span.set_attribute("m", fixed.m)

        filtered = toeplitz(c, n_samples - fixed.m) @ values
        fit = realize(filtered, q, max_degree=max_degree)
        result = _combine(BaselineMethod.TSD, values, fit.best.a, c, fixed)
        logger.info(
            f"TSD estimated poles {result.estimated_poles}, misfit {result.misfit_sq:.6g}"
        )
        return result


def recursive_fpgor(y: SignalLike, n: int, max_degree: Optional[int] = None) -> BaselineResult:
    """
    Raise the order one pole at a time: an optimal order-1 fit, then repeated
    fixed pole fits with all poles found so far kept fixed.

    Every step is optimal, but the order-n model generally is not.
    """
    values = as_values(y)
    if n < 1 or values.size <= 2 * n:
        raise InvalidInputError(f"Need n >= 1 and N > 2n, got N={values.size}, n={n}")

    with tracer.start_as_current_span("recursive_fpgor"):
        poles = realize(values, 1, max_degree=max_degree).best.poles
        for order in range(2, n + 1):
            fixed = FixedPoleSet(tuple(poles))
            fit = realize(values, order, fixed, max_degree=max_degree)
            poles = list(poles) + poly_roots(fit.best.b)
            logger.debug(f"Recursive fit order {order}: poles {poles}")

        model = poly_from_roots(FixedPoleSet(tuple(poles)))
        proj = project_misfit(model, values)
        return BaselineResult(
            method=BaselineMethod.RECURSIVE,
            estimated_poles=list(poles),
            combined_model=model,
            misfit_sq=proj.misfit_sq,
            yhat=proj.yhat,
            fixed=FixedPoleSet.empty()
        )
