"""
Linear Algebra Module

Dense kernels shared by all solvers: PSD square roots, Cholesky
factorizations and generalized eigenvalues of matrix pencils.
"""

from ellipsoid_distance.linalg.dense import (
    CholeskyFactor,
    Pencil,
    SymPdMatrix,
    cholesky,
    distinct_values,
    full_rank,
    generalized_real_eigenvalues,
    is_singular_pencil,
    smallest_singular_value,
    solve_cholesky,
    sqrt_pd,
    symmetric_eigh,
    unit_vector,
)

__all__ = [
    "CholeskyFactor",
    "Pencil",
    "SymPdMatrix",
    "cholesky",
    "distinct_values",
    "full_rank",
    "generalized_real_eigenvalues",
    "is_singular_pencil",
    "smallest_singular_value",
    "solve_cholesky",
    "sqrt_pd",
    "symmetric_eigh",
    "unit_vector",
]
