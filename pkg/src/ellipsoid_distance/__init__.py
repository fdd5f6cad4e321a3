"""
Ellipsoid Distance - ADMM and Global Solvers for Ellipsoid Distance Problems

This package computes the distance between two ellipsoids (a convex problem,
solved by ADMM with fixed or self-adaptive penalty) and the distance between
their boundaries (a nonconvex problem, solved by ADMM with a reflection
restart and certified by a generalized-eigenvalue global method).
"""

__version__ = "1.0.0"

# Expose key components for easier imports
from ellipsoid_distance.geometry import Ellipsoid
from ellipsoid_distance.solvers import (
    SolveReport,
    SolveStatus,
    solve_convex,
    solve_global,
    solve_nonconvex,
    solve_with_restart,
)

__all__ = [
    "__version__",
    "Ellipsoid",
    "SolveReport",
    "SolveStatus",
    "solve_convex",
    "solve_global",
    "solve_nonconvex",
    "solve_with_restart",
]
