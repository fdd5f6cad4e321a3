"""
Solvers Module

Convex ADMM and sa-ADMM for the distance between ellipsoids, nonconvex
ADMM with reflection restart for the distance between their boundaries,
and the generalized-eigenvalue global method used to certify it.

The name-based registry lives in ellipsoid_distance.solvers.registry.
"""

from ellipsoid_distance.solvers.admm_convex import (
    AdmmState,
    ConvexSolverOptions,
    solve_convex,
)
from ellipsoid_distance.solvers.admm_nonconvex import (
    NonconvexSolverOptions,
    PenaltyHistory,
    UpdateRule,
    solve_nonconvex,
    solve_with_restart,
)
from ellipsoid_distance.solvers.global_kkt import KktCandidate, build_pencils, solve_global
from ellipsoid_distance.solvers.report import (
    NonconvexResiduals,
    Residuals,
    SolveReport,
    SolveStatus,
)

__all__ = [
    "AdmmState",
    "ConvexSolverOptions",
    "KktCandidate",
    "NonconvexResiduals",
    "NonconvexSolverOptions",
    "PenaltyHistory",
    "Residuals",
    "SolveReport",
    "SolveStatus",
    "UpdateRule",
    "build_pencils",
    "solve_convex",
    "solve_global",
    "solve_nonconvex",
    "solve_with_restart",
]
