"""Heuristic and reference baselines for the fixed pole problem."""
from src.baselines.prefilter import (
    BaselineMethod,
    BaselineResult,
    npf,
    tsd,
    recursive_fpgor
)
from src.baselines.grid_search import grid_refine, misfit_objective

__all__ = [
    "BaselineMethod",
    "BaselineResult",
    "npf",
    "tsd",
    "recursive_fpgor",
    "grid_refine",
    "misfit_objective"
]
