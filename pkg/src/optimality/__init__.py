"""Misfit projection, stationarity residuals and rank diagnostics."""
from src.optimality.projection import ProjectionResult, project_misfit
from src.optimality.conditions import (
    FoncResidual,
    RankDiagnostic,
    fonc_residuals,
    estimate_multipliers,
    filtered_hankel_rank,
    filtered_hankel_diagnostic
)

__all__ = [
    "ProjectionResult",
    "project_misfit",
    "FoncResidual",
    "RankDiagnostic",
    "fonc_residuals",
    "estimate_multipliers",
    "filtered_hankel_rank",
    "filtered_hankel_diagnostic"
]
