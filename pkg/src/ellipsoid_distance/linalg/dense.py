"""
Dense Linear Algebra - Numerical Kernels for the Solvers

Provides the symmetric positive definite matrix type, the PSD square root,
Cholesky factorization with triangular solves, symmetric eigendecomposition
and a real-eigenvalue extractor for matrix pencils lambda*A + B.

All functions are pure: inputs are never modified and no state is shared.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, List, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike
from scipy import linalg

from ellipsoid_distance.exceptions import (
    DegeneratePencil,
    DimensionMismatch,
    NotPositiveDefinite,
)

logger = logging.getLogger(__name__)

# Eigenvalue filters for generalized_real_eigenvalues
DEFAULT_IMAG_TOL = 1e-8
DEFAULT_MAX_ABS_EIGENVALUE = 1e12
VERIFY_SINGULAR_VALUE_TOL = 1e-6

# Rank probing for singular pencils
REGULARITY_PROBES = 3
REGULARITY_TOL = 1e-12
_PROBE_SEED = 20_231_107


def _as_square(m: ArrayLike, name: str = "matrix") -> np.ndarray:
    arr = np.array(m, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise DimensionMismatch(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True, eq=False)
class SymPdMatrix:
    """
    Symmetric positive definite matrix.

    Construct through from_array(), which symmetrizes the input and checks
    definiteness with a Cholesky attempt. The entries array is read-only.
    """

    entries: np.ndarray

    @property
    def order(self) -> int:
        return int(self.entries.shape[0])

    @classmethod
    def from_array(cls, m: ArrayLike, name: str = "matrix") -> "SymPdMatrix":
        """
        Build a SymPdMatrix from any square array.

        Args:
            m: Square array; replaced by (m + m^T) / 2
            name: Used in error messages

        Returns:
            Validated SymPdMatrix

        Raises:
            DimensionMismatch: If m is not square
            NotPositiveDefinite: If the Cholesky factorization fails
        """
        arr = _as_square(m, name)
        sym = 0.5 * (arr + arr.T)

        try:
            linalg.cholesky(sym, lower=True)
        except linalg.LinAlgError as e:
            raise NotPositiveDefinite(f"{name} is not positive definite: {e}") from e

        sym.setflags(write=False)
        return cls(entries=sym)

    def __array__(self, dtype: Any = None, copy: Any = None) -> np.ndarray:
        if dtype is None:
            return self.entries
        return self.entries.astype(dtype)

    def __repr__(self) -> str:
        return f"SymPdMatrix(order={self.order})"


@dataclass(frozen=True, eq=False)
class CholeskyFactor:
    """Lower-triangular factor L of a positive definite matrix M = L L^T."""

    lower: np.ndarray

    @property
    def order(self) -> int:
        return int(self.lower.shape[0])

    def reconstruct(self) -> np.ndarray:
        return self.lower @ self.lower.T


@dataclass(frozen=True, eq=False)
class Pencil:
    """
    Matrix pencil lambda*a + b.

    a multiplies the eigenvalue, b is the constant term.
    """

    a: np.ndarray
    b: np.ndarray
    order: int = field(init=False)

    def __post_init__(self) -> None:
        a = _as_square(self.a, "pencil coefficient a")
        b = _as_square(self.b, "pencil coefficient b")
        if a.shape != b.shape:
            raise DimensionMismatch(f"pencil coefficients differ in shape: {a.shape} vs {b.shape}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "order", int(a.shape[0]))

    def evaluate(self, value: float) -> np.ndarray:
        """Return value*a + b."""
        return value * self.a + self.b


def symmetric_eigh(m: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    """
    Symmetric eigendecomposition m = V diag(w) V^T.

    Returns:
        (w, V) with eigenvalues ascending
    """
    arr = _as_square(m)
    w, v = linalg.eigh(0.5 * (arr + arr.T))
    return w, v


def sqrt_pd(m: SymPdMatrix) -> SymPdMatrix:
    """
    Symmetric positive definite square root R with R R = m.

    Computed from m = V diag(w) V^T as R = V diag(sqrt(w)) V^T.

    Raises:
        NotPositiveDefinite: If an eigenvalue is at or below
            order * machine epsilon * largest eigenvalue
    """
    w, v = symmetric_eigh(m)
    threshold = m.order * np.finfo(float).eps * max(float(w[-1]), 0.0)
    if w[0] <= threshold:
        raise NotPositiveDefinite(
            f"smallest eigenvalue {w[0]:.3e} is below the threshold {threshold:.3e}"
        )

    root = (v * np.sqrt(w)) @ v.T
    return SymPdMatrix.from_array(root, name="square root")


def cholesky(m: ArrayLike) -> CholeskyFactor:
    """
    Cholesky factorization of a positive definite matrix.

    Args:
        m: SymPdMatrix or any symmetric positive definite array

    Raises:
        NotPositiveDefinite: If a pivot is not positive
    """
    arr = _as_square(m)
    try:
        lower = linalg.cholesky(arr, lower=True)
    except linalg.LinAlgError as e:
        raise NotPositiveDefinite(f"Cholesky factorization failed: {e}") from e
    return CholeskyFactor(lower=lower)


def solve_cholesky(f: CholeskyFactor, rhs: ArrayLike) -> np.ndarray:
    """Solve (L L^T) x = rhs by one forward and one backward substitution."""
    vec = np.asarray(rhs, dtype=float)
    if vec.ndim != 1 or vec.shape[0] != f.order:
        raise DimensionMismatch(f"rhs of shape {vec.shape} does not match factor order {f.order}")
    return linalg.cho_solve((f.lower, True), vec)


def _smallest_singular_value(m: np.ndarray) -> float:
    return float(linalg.svdvals(m)[-1])


def is_singular_pencil(
    p: Pencil, probes: int = REGULARITY_PROBES, tol: float = REGULARITY_TOL
) -> bool:
    """
    Detect a pencil with det(lambda*a + b) identically zero.

    The pencil is evaluated at `probes` fixed pseudo-random shifts scaled by
    ||b|| / ||a||. It counts as singular when every evaluation is rank
    deficient relative to the coefficient norms.
    """
    norm_a = float(np.linalg.norm(p.a))
    norm_b = float(np.linalg.norm(p.b))
    if norm_a == 0.0 and norm_b == 0.0:
        return True
    if norm_a == 0.0:
        return _smallest_singular_value(p.b) <= tol * norm_b

    scale = norm_b / norm_a if norm_b > 0.0 else 1.0
    rng = np.random.Generator(np.random.PCG64(_PROBE_SEED))
    magnitudes = rng.uniform(0.5, 2.0, size=probes)
    signs = rng.choice([-1.0, 1.0], size=probes)

    for shift in magnitudes * signs * scale:
        sigma = _smallest_singular_value(p.evaluate(shift))
        if sigma > tol * (abs(shift) * norm_a + norm_b):
            return False
    return True


def generalized_real_eigenvalues(
    p: Pencil,
    imag_tol: float = DEFAULT_IMAG_TOL,
    max_abs: float = DEFAULT_MAX_ABS_EIGENVALUE,
    verify: bool = True,
    check_regular: bool = True,
) -> List[float]:
    """
    Finite real solutions of det(lambda*a + b) = 0.

    Args:
        p: The pencil
        imag_tol: Accept lambda when |Im| <= imag_tol * (1 + |Re|)
        max_abs: Eigenvalues larger than this are treated as infinite
        verify: Keep only lambda with smallest singular value of
            lambda*a + b at most 1e-6 * (||a|| + ||b||)
        check_regular: Probe for a singular pencil first

    Returns:
        Sorted list of real eigenvalues (with multiplicity)

    Raises:
        DegeneratePencil: If check_regular is set and the pencil is singular
    """
    if check_regular and is_singular_pencil(p):
        raise DegeneratePencil(f"pencil of order {p.order} is singular")

    # (-b) v = lambda a v  <=>  (lambda a + b) v = 0
    alpha, beta = linalg.eig(-p.b, p.a, right=False, homogeneous_eigvals=True)

    finite = np.abs(beta) > np.finfo(float).eps * np.abs(alpha)
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.where(finite, alpha / np.where(finite, beta, 1.0), np.inf)

    keep = (
        finite
        & np.isfinite(values)
        & (np.abs(values.real) <= max_abs)
        & (np.abs(values.imag) <= imag_tol * (1.0 + np.abs(values.real)))
    )
    real_values = np.sort(values.real[keep])

    if verify and real_values.size:
        bound = VERIFY_SINGULAR_VALUE_TOL * (np.linalg.norm(p.a, 2) + np.linalg.norm(p.b, 2))
        real_values = np.array(
            [lam for lam in real_values if _smallest_singular_value(p.evaluate(lam)) <= bound]
        )

    logger.debug(
        f"Pencil of order {p.order}: {int(np.count_nonzero(~finite))} infinite, "
        f"{real_values.size} real eigenvalues kept"
    )
    return [float(v) for v in real_values]


def distinct_values(values: List[float], rel_tol: float = 1e-9) -> List[float]:
    """Collapse sorted-order neighbours closer than rel_tol * (1 + |v|)."""
    result: List[float] = []
    for value in sorted(values):
        if result and abs(value - result[-1]) <= rel_tol * (1.0 + abs(value)):
            continue
        result.append(value)
    return result


def smallest_singular_value(m: ArrayLike) -> float:
    """Smallest singular value of a dense matrix."""
    return _smallest_singular_value(np.asarray(m, dtype=float))


def unit_vector(d: int, index: int = 0) -> np.ndarray:
    """Coordinate unit vector e_index of length d."""
    e = np.zeros(d)
    e[index] = 1.0
    return e


def full_rank(m: np.ndarray, rel_tol: float = 1e-8) -> bool:
    """True when sigma_min(m) > rel_tol * sigma_max(m)."""
    s = linalg.svdvals(m)
    return bool(s[-1] > rel_tol * s[0])


def optional_array(v: Optional[ArrayLike], size: int, name: str) -> Optional[np.ndarray]:
    """Validate an optional vector argument against an expected length."""
    if v is None:
        return None
    arr = np.array(v, dtype=float)
    if arr.shape != (size,):
        raise DimensionMismatch(f"{name} must have shape ({size},), got {arr.shape}")
    return arr
