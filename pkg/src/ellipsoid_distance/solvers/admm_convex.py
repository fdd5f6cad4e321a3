"""
Convex ADMM - Distance Between Two Ellipsoids

Solves min 1/2 ||x1 - x2||^2 subject to x_i in E_i after the whitening
change of variables y_i = S_i x_i - c_i, which turns each constraint into
||y_i|| <= 1. One iteration is

    x-step:  H(tau) x = [S1 (lam1 + tau (y1 + c1)); S2 (lam2 + tau (y2 + c2))]
    y-step:  y_i = projection of S_i x_i - c_i - lam_i / tau onto the unit ball
    lam-step: lam_i = lam_i - tau (S_i x_i - y_i - c_i)

with H(tau) = [[I + tau Q1, -I], [-I, I + tau Q2]]. The self-adaptive variant
rebalances tau between the dual residual ||R_x|| and the primal residual
||R_c||, refactoring H only when tau changes.
"""

import functools
import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike
from scipy import linalg

from ellipsoid_distance.exceptions import ConfigError, DimensionMismatch
from ellipsoid_distance.geometry.ellipsoid import (
    Ellipsoid,
    WhitenedPair,
    constraint_value,
    whiten,
)
from ellipsoid_distance.linalg.dense import (
    CholeskyFactor,
    cholesky,
    optional_array,
    solve_cholesky,
)
from ellipsoid_distance.solvers.report import Residuals, SolveReport, SolveStatus

logger = logging.getLogger(__name__)

# Remedy for a point passing the residual test away from the boundaries
EPSILON_TIGHTENING = 100.0


def step_alpha_schedule(n: int, cutoff: int = 100, value: float = 1.0) -> float:
    """alpha_n = value for n < cutoff, 0 afterwards (finite sum)."""
    return value if n < cutoff else 0.0


@dataclass
class ConvexSolverOptions:
    """Options of the convex ADMM (adaptive=False) and sa-ADMM (adaptive=True)."""

    tau0: float = 1.0
    eta: float = 0.1
    alpha_schedule: Callable[[int], float] = step_alpha_schedule
    epsilon: float = 1e-6
    delta: float = 1e-8
    max_iterations: int = 1_000_000
    adaptive: bool = False
    use_reduced_system: bool = False
    record_trace: bool = False

    def __post_init__(self) -> None:
        if self.tau0 <= 0:
            raise ConfigError(f"tau0 must be positive, got {self.tau0}")
        if not 0 < self.eta < 1:
            raise ConfigError(f"eta must lie in (0, 1), got {self.eta}")
        if self.epsilon <= 0 or self.delta <= 0:
            raise ConfigError("epsilon and delta must be positive")
        if self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be positive, got {self.max_iterations}")

    @classmethod
    def with_alpha(
        cls, cutoff: int = 100, value: float = 1.0, **kwargs: object
    ) -> "ConvexSolverOptions":
        """Options using step_alpha_schedule with a custom cutoff/value."""
        schedule = functools.partial(step_alpha_schedule, cutoff=cutoff, value=value)
        return cls(alpha_schedule=schedule, **kwargs)  # type: ignore[arg-type]


@dataclass
class AdmmState:
    """Iterate (x, y, lam) with the penalty and its cached factorization."""

    x: np.ndarray
    y: np.ndarray
    lam: np.ndarray
    tau: float
    n: int = 0
    chol: Optional[CholeskyFactor] = None
    chol_stale: bool = True
    reduced_lu: Optional[Tuple[np.ndarray, np.ndarray]] = None

    @classmethod
    def initial(
        cls,
        w: WhitenedPair,
        tau: float,
        y0: Optional[ArrayLike] = None,
        lambda0: Optional[ArrayLike] = None,
    ) -> "AdmmState":
        size = 2 * w.d
        y = optional_array(y0, size, "y0")
        lam = optional_array(lambda0, size, "lambda0")
        return cls(
            x=np.zeros(size),
            y=np.zeros(size) if y is None else y,
            lam=np.zeros(size) if lam is None else lam,
            tau=float(tau),
        )


def hessian(w: WhitenedPair, tau: float) -> np.ndarray:
    """H(tau) = [[I + tau Q1, -I], [-I, I + tau Q2]]."""
    eye = np.eye(w.d)
    return np.block([[eye + tau * w.q1, -eye], [-eye, eye + tau * w.q2]])


def reduced_matrix(w: WhitenedPair, tau: float) -> np.ndarray:
    """tau (Q1 + Q2) + tau^2 Q2 Q1, the d x d matrix of the reduced x-step."""
    return tau * (w.q1 + w.q2) + tau * tau * (w.q2 @ w.q1)


def refresh_factorization(w: WhitenedPair, s: AdmmState, reduced: bool = False) -> None:
    """Factor H(s.tau) (and the reduced matrix if requested) and clear the stale flag."""
    s.chol = cholesky(hessian(w, s.tau))
    s.reduced_lu = linalg.lu_factor(reduced_matrix(w, s.tau)) if reduced else None
    s.chol_stale = False


def x_step_rhs(w: WhitenedPair, s: AdmmState) -> np.ndarray:
    """[S1 (lam1 + tau (y1 + c1)); S2 (lam2 + tau (y2 + c2))]."""
    return w.apply_s(s.lam + s.tau * (s.y + w.c))


def _require_fresh(s: AdmmState) -> None:
    if s.chol_stale or s.chol is None:
        raise ValueError("factorization is stale; call refresh_factorization first")


def x_step(w: WhitenedPair, s: AdmmState) -> np.ndarray:
    """Minimize the augmented Lagrangian over x by two triangular solves."""
    _require_fresh(s)
    assert s.chol is not None
    return solve_cholesky(s.chol, x_step_rhs(w, s))


def x_step_reduced(w: WhitenedPair, s: AdmmState) -> np.ndarray:
    """
    Same minimizer as x_step through a d x d system.

    Eliminating x2 = (I + tau Q1) x1 - u1 from H x = u gives
    (tau (Q1 + Q2) + tau^2 Q2 Q1) x1 = u2 + (I + tau Q2) u1.
    """
    _require_fresh(s)
    if s.reduced_lu is None:
        s.reduced_lu = linalg.lu_factor(reduced_matrix(w, s.tau))

    u1, u2 = w.split(x_step_rhs(w, s))
    eye = np.eye(w.d)
    x1 = linalg.lu_solve(s.reduced_lu, u2 + (eye + s.tau * w.q2) @ u1)
    x2 = (eye + s.tau * w.q1) @ x1 - u1
    return np.concatenate([x1, x2])


def projection_argument(
    w: WhitenedPair, tau: float, x_next: np.ndarray, lam: np.ndarray
) -> np.ndarray:
    return w.apply_s(x_next) - w.c - lam / tau


def project_unit_ball(v: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(v)
    return v if norm <= 1.0 else v / norm


def y_step_ball(w: WhitenedPair, s: AdmmState, x_next: np.ndarray) -> np.ndarray:
    """Project v_i = S_i x_i - c_i - lam_i / tau onto the unit ball, blockwise."""
    v1, v2 = w.split(projection_argument(w, s.tau, x_next, s.lam))
    return np.concatenate([project_unit_ball(v1), project_unit_ball(v2)])


def lambda_step(
    w: WhitenedPair,
    tau: float,
    x_next: np.ndarray,
    y_next: np.ndarray,
    lam: np.ndarray,
) -> np.ndarray:
    """lam_i - tau (S_i x_i - y_i - c_i)."""
    return lam - tau * w.coupling_residual(x_next, y_next)


def dual_residual(w: WhitenedPair, x: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """R_x = (x1 - x2 - S1 lam1; x2 - x1 - S2 lam2)."""
    x1, x2 = w.split(x)
    diff = x1 - x2
    return np.concatenate([diff, -diff]) - w.apply_s(lam)


def residuals_convex(w: WhitenedPair, x: np.ndarray, y: np.ndarray, lam: np.ndarray) -> Residuals:
    """Norms of R_x, R_y = y - proj_B(y - lam) and R_c = S x - y - c."""
    y1, y2 = w.split(y)
    l1, l2 = w.split(lam)
    ry = np.concatenate([y1 - project_unit_ball(y1 - l1), y2 - project_unit_ball(y2 - l2)])
    return Residuals(
        rx=float(np.linalg.norm(dual_residual(w, x, lam))),
        ry=float(np.linalg.norm(ry)),
        rc=float(np.linalg.norm(w.coupling_residual(x, y))),
    )


def adapt_penalty(tau: float, residuals: Residuals, eta: float, alpha: float) -> float:
    """Self-adaptive rule: grow tau when R_x lags R_c, shrink it in the opposite case."""
    if residuals.rx < eta * residuals.rc:
        return tau * (1.0 + alpha)
    if eta * residuals.rx > residuals.rc:
        return tau / (1.0 + alpha)
    return tau


def _near_boundaries(
    e1: Ellipsoid, e2: Ellipsoid, x1: np.ndarray, x2: np.ndarray, tol: float
) -> bool:
    return (
        abs(constraint_value(e1, x1) - 1.0) < tol
        and abs(constraint_value(e2, x2) - 1.0) < tol
    )


def solve_convex(
    e1: Ellipsoid,
    e2: Ellipsoid,
    opts: Optional[ConvexSolverOptions] = None,
    y0: Optional[ArrayLike] = None,
    lambda0: Optional[ArrayLike] = None,
) -> SolveReport:
    """
    Distance between two ellipsoids by ADMM.

    Stops when rx + ry + rc < epsilon. If the closest points are farther
    apart than delta they must also lie on the boundaries to within epsilon;
    the first time this fails epsilon is divided by 100 for the rest of the
    run.

    Args:
        e1, e2: The ellipsoids
        opts: Solver options (fixed penalty by default)
        y0, lambda0: Stacked starting points, zero by default

    Returns:
        SolveReport with status Converged or MaxIterations

    Raises:
        DimensionMismatch: If the ellipsoids differ in dimension
    """
    opts = opts or ConvexSolverOptions()
    if e1.d != e2.d:
        raise DimensionMismatch(f"ellipsoid dimensions differ: {e1.d} vs {e2.d}")

    w = whiten(e1, e2)
    state = AdmmState.initial(w, opts.tau0, y0, lambda0)
    refresh_factorization(w, state, reduced=opts.use_reduced_system)
    step = x_step_reduced if opts.use_reduced_system else x_step
    solver_name = "sa-admm" if opts.adaptive else "admm"

    epsilon = opts.epsilon
    tightened = False
    status = SolveStatus.MAX_ITERATIONS
    penalty_log: List[Tuple[int, float]] = []
    trace: Optional[List[np.ndarray]] = [] if opts.record_trace else None
    residuals = Residuals(np.inf, np.inf, np.inf)
    y_change = np.inf
    iterations = 0

    for n in range(opts.max_iterations):
        state.n = n
        x_next = step(w, state)
        y_next = y_step_ball(w, state, x_next)
        lam_next = lambda_step(w, state.tau, x_next, y_next, state.lam)

        y_change = state.tau * float(np.linalg.norm(y_next - state.y))
        state.x, state.y, state.lam = x_next, y_next, lam_next
        residuals = residuals_convex(w, x_next, y_next, lam_next)
        iterations = n + 1
        if trace is not None:
            trace.append(np.concatenate([x_next, y_next, lam_next]))

        if residuals.total < epsilon:
            x1, x2 = w.split(x_next)
            separated = float(np.linalg.norm(x1 - x2)) > opts.delta
            if tightened or not separated or _near_boundaries(e1, e2, x1, x2, epsilon):
                status = SolveStatus.CONVERGED
                break
            tightened = True
            epsilon /= EPSILON_TIGHTENING
            logger.debug(
                f"Iteration {iterations}: points off the boundaries, "
                f"tightening epsilon to {epsilon:.1e}"
            )

        if opts.adaptive:
            new_tau = adapt_penalty(state.tau, residuals, opts.eta, opts.alpha_schedule(n))
            if new_tau != state.tau:
                state.tau = new_tau
                state.chol_stale = True
                refresh_factorization(w, state, reduced=opts.use_reduced_system)
                penalty_log.append((iterations, new_tau))
                logger.debug(f"Iteration {iterations}: tau -> {new_tau:.6g}")

    x1, x2 = w.split(state.x)
    report = SolveReport(
        x1=x1.copy(),
        x2=x2.copy(),
        status=status,
        iterations=iterations,
        final_residuals=residuals,
        penalty_log=penalty_log,
        solver=solver_name,
        y=state.y.copy(),
        lam=state.lam.copy(),
        diagnostics={
            "final_tau": state.tau,
            "epsilon_tightened": tightened,
            "y_change_monitor": y_change,
        },
        trace=trace,
    )
    logger.info(
        f"{solver_name}: {status.value} after {iterations} iterations, "
        f"distance {report.distance:.10g}"
    )
    return report
