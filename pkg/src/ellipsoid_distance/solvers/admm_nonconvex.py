"""
Nonconvex ADMM - Distance Between Ellipsoid Boundaries

Same splitting as the convex solver, but y_i is constrained to the unit
sphere, so the y-step normalizes instead of clipping. The penalty only
grows (by the factor beta) and never shrinks; two growth rules are
available:

    heuristic    tau grows when some block's infeasibility
                 ||S_i x_i - y_i - c_i|| is at least kappa and failed to
                 contract by the factor eta during the last iteration
    theoretical  tau grows when either the mixed residual
                 ||S x^{n+1} - y^n - c|| or the full residual
                 ||S x^{n+1} - y^{n+1} - c|| failed to contract by eta

solve_with_restart reruns from the point opposite the first solution across
each center and keeps the closer pair.
"""

import dataclasses
import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike

from ellipsoid_distance.exceptions import ConfigError, DimensionMismatch
from ellipsoid_distance.geometry.ellipsoid import (
    Ellipsoid,
    WhitenedPair,
    reflect_through_center,
    whiten,
)
from ellipsoid_distance.linalg.dense import optional_array, unit_vector
from ellipsoid_distance.solvers.admm_convex import (
    AdmmState,
    dual_residual,
    lambda_step,
    projection_argument,
    refresh_factorization,
    x_step,
)
from ellipsoid_distance.solvers.report import NonconvexResiduals, SolveReport, SolveStatus

logger = logging.getLogger(__name__)


class UpdateRule(str, Enum):
    """Penalty growth rule of the nonconvex solver."""

    HEURISTIC = "heuristic"
    THEORETICAL = "theoretical"


@dataclass
class NonconvexSolverOptions:
    """
    Options of the nonconvex ADMM.

    fallback_unit is the y_i used when v_i = 0; None means e_1.
    combined_criterion applies the heuristic test to the stacked residual
    instead of per block. tau_max caps the penalty; exceeding it ends the
    run with status Degenerate.
    """

    tau0: float = 10.0
    eta: float = 0.99
    beta: float = 2.0
    kappa: float = 0.1
    epsilon: float = 1e-6
    epsilon0: float = 1e-6
    max_iterations: int = 1_000_000
    update_rule: UpdateRule = UpdateRule.HEURISTIC
    fallback_unit: Optional[np.ndarray] = None
    combined_criterion: bool = False
    tau_max: float = 1e12
    record_trace: bool = False

    def __post_init__(self) -> None:
        if self.tau0 <= 0:
            raise ConfigError(f"tau0 must be positive, got {self.tau0}")
        if not 0 < self.eta < 1:
            raise ConfigError(f"eta must lie in (0, 1), got {self.eta}")
        if self.beta <= 1:
            raise ConfigError(f"beta must exceed 1, got {self.beta}")
        if self.kappa <= 0 or self.epsilon <= 0 or self.epsilon0 <= 0:
            raise ConfigError("kappa, epsilon and epsilon0 must be positive")
        if self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be positive, got {self.max_iterations}")
        self.update_rule = UpdateRule(self.update_rule)
        if self.fallback_unit is not None:
            unit = np.asarray(self.fallback_unit, dtype=float)
            if abs(np.linalg.norm(unit) - 1.0) > 1e-12:
                raise ConfigError("fallback_unit must have unit norm")
            self.fallback_unit = unit

    def fallback_for(self, d: int) -> np.ndarray:
        if self.fallback_unit is None:
            return unit_vector(d)
        if self.fallback_unit.shape != (d,):
            raise DimensionMismatch(f"fallback_unit must have length {d}")
        return self.fallback_unit


@dataclass
class PenaltyHistory:
    """
    Per-block infeasibility norms around one iteration.

    previous/current are ||S_i x_i - y_i - c_i|| at iterations n and n+1.
    previous_mixed/current_mixed are ||S_i x_i^n - y_i^{n-1} - c_i|| and
    ||S_i x_i^{n+1} - y_i^n - c_i||, needed by the theoretical rule only.
    """

    previous: np.ndarray
    current: np.ndarray
    previous_mixed: Optional[np.ndarray] = None
    current_mixed: Optional[np.ndarray] = None


def _normalize_blocks(
    w: WhitenedPair, v: np.ndarray, fallback: np.ndarray
) -> Tuple[np.ndarray, int]:
    blocks = []
    fallbacks = 0
    for block in w.split(v):
        norm = np.linalg.norm(block)
        if norm > 0.0:
            blocks.append(block / norm)
        else:
            blocks.append(fallback.copy())
            fallbacks += 1
    return np.concatenate(blocks), fallbacks


def y_step_sphere(
    w: WhitenedPair,
    tau: float,
    x_next: np.ndarray,
    lam: np.ndarray,
    fallback: np.ndarray,
) -> np.ndarray:
    """Normalize v_i = S_i x_i - c_i - lam_i / tau; v_i = 0 maps to fallback."""
    y, _ = _normalize_blocks(w, projection_argument(w, tau, x_next, lam), fallback)
    return y


def residuals_nonconvex(
    w: WhitenedPair, x: np.ndarray, y: np.ndarray, lam: np.ndarray
) -> NonconvexResiduals:
    """
    R_x and R_c as in the convex case, plus the sphere residual

        ry = sum_i min(||lam_i - ||lam_i|| y_i||, ||lam_i + ||lam_i|| y_i||)
    """
    ry = 0.0
    for y_i, l_i in zip(w.split(y), w.split(lam)):
        scale = np.linalg.norm(l_i)
        ry += min(np.linalg.norm(l_i - scale * y_i), np.linalg.norm(l_i + scale * y_i))
    return NonconvexResiduals(
        rx=float(np.linalg.norm(dual_residual(w, x, lam))),
        ry=float(ry),
        rc=float(np.linalg.norm(w.coupling_residual(x, y))),
    )


def penalty_update(
    rule: UpdateRule,
    history: PenaltyHistory,
    tau: float,
    eta: float,
    kappa: float,
    beta: float,
    combined: bool = False,
) -> float:
    """
    Return tau or beta * tau according to the selected growth rule.

    Raises:
        ValueError: If the theoretical rule lacks the mixed residuals
    """
    rule = UpdateRule(rule)
    previous = np.asarray(history.previous, dtype=float)
    current = np.asarray(history.current, dtype=float)

    if rule == UpdateRule.HEURISTIC:
        if combined:
            prev_norm = float(np.linalg.norm(previous))
            grow = prev_norm >= kappa and float(np.linalg.norm(current)) > eta * prev_norm
        else:
            grow = bool(np.any((previous >= kappa) & (current > eta * previous)))
    else:
        if history.previous_mixed is None or history.current_mixed is None:
            raise ValueError("theoretical rule needs previous_mixed and current_mixed")
        mixed_gap = np.asarray(history.current_mixed) - eta * np.asarray(history.previous_mixed)
        full_gap = current - eta * previous
        grow = max(float(np.max(mixed_gap)), float(np.max(full_gap))) > 0.0

    return beta * tau if grow else tau


def solve_nonconvex(
    e1: Ellipsoid,
    e2: Ellipsoid,
    opts: Optional[NonconvexSolverOptions] = None,
    y0: Optional[ArrayLike] = None,
    lambda0: Optional[ArrayLike] = None,
) -> SolveReport:
    """
    Closest pair of boundary points by nonconvex ADMM.

    Args:
        e1, e2: The ellipsoids
        opts: Solver options
        y0: Stacked start on the unit spheres, (e_1; e_1) by default
        lambda0: Stacked multipliers, zero by default

    Returns:
        SolveReport; status Degenerate when tau exceeds opts.tau_max
    """
    opts = opts or NonconvexSolverOptions()
    if e1.d != e2.d:
        raise DimensionMismatch(f"ellipsoid dimensions differ: {e1.d} vs {e2.d}")

    w = whiten(e1, e2)
    fallback = opts.fallback_for(w.d)
    start = optional_array(y0, 2 * w.d, "y0")
    if start is None:
        start = np.concatenate([unit_vector(w.d), unit_vector(w.d)])

    state = AdmmState.initial(w, opts.tau0, start, lambda0)
    refresh_factorization(w, state)

    status = SolveStatus.MAX_ITERATIONS
    penalty_log: List[Tuple[int, float]] = []
    trace: Optional[List[np.ndarray]] = [] if opts.record_trace else None
    residuals = NonconvexResiduals(np.inf, np.inf, np.inf)
    previous_blocks: Optional[np.ndarray] = None
    previous_mixed: Optional[np.ndarray] = None
    fallback_count = 0
    y_change = np.inf
    iterations = 0

    for n in range(opts.max_iterations):
        state.n = n
        x_next = x_step(w, state)
        mixed_blocks = w.block_norms(w.coupling_residual(x_next, state.y))

        v = projection_argument(w, state.tau, x_next, state.lam)
        y_next, fallbacks = _normalize_blocks(w, v, fallback)
        if fallbacks:
            fallback_count += fallbacks
            logger.warning(
                f"Iteration {n + 1}: v_i = 0 in {fallbacks} block(s), using fallback direction"
            )

        lam_next = lambda_step(w, state.tau, x_next, y_next, state.lam)
        current_blocks = w.block_norms(w.coupling_residual(x_next, y_next))

        y_change = state.tau * float(np.linalg.norm(y_next - state.y))
        state.x, state.y, state.lam = x_next, y_next, lam_next
        residuals = residuals_nonconvex(w, x_next, y_next, lam_next)
        iterations = n + 1
        if trace is not None:
            trace.append(np.concatenate([x_next, y_next, lam_next]))

        if residuals.total < opts.epsilon:
            status = SolveStatus.CONVERGED
            break

        if previous_blocks is not None:
            history = PenaltyHistory(
                previous=previous_blocks,
                current=current_blocks,
                previous_mixed=previous_mixed,
                current_mixed=mixed_blocks,
            )
            new_tau = penalty_update(
                opts.update_rule,
                history,
                state.tau,
                opts.eta,
                opts.kappa,
                opts.beta,
                combined=opts.combined_criterion,
            )
            if new_tau != state.tau:
                if new_tau > opts.tau_max:
                    status = SolveStatus.DEGENERATE
                    logger.warning(
                        f"Iteration {iterations}: penalty would exceed "
                        f"tau_max={opts.tau_max:.1e}, stopping"
                    )
                    break
                state.tau = new_tau
                state.chol_stale = True
                refresh_factorization(w, state)
                penalty_log.append((iterations, new_tau))
                logger.debug(f"Iteration {iterations}: tau -> {new_tau:.6g}")

        previous_blocks = current_blocks
        previous_mixed = mixed_blocks

    x1, x2 = w.split(state.x)
    report = SolveReport(
        x1=x1.copy(),
        x2=x2.copy(),
        status=status,
        iterations=iterations,
        final_residuals=residuals,
        penalty_log=penalty_log,
        solver="admm-nc",
        y=state.y.copy(),
        lam=state.lam.copy(),
        fallback_count=fallback_count,
        diagnostics={
            "final_tau": state.tau,
            "update_rule": opts.update_rule.value,
            "y_change_monitor": y_change,
        },
        trace=trace,
    )
    logger.info(
        f"admm-nc: {status.value} after {iterations} iterations, distance {report.distance:.10g}"
    )
    return report


def restart_point(w: WhitenedPair, e1: Ellipsoid, e2: Ellipsoid, report: SolveReport) -> np.ndarray:
    """Stacked y^0 of the restarted run: y_i = S_i (2 z_i - x_i*) - c_i = -S_i x_i* + c_i."""
    x0 = np.concatenate(
        [reflect_through_center(e1, report.x1), reflect_through_center(e2, report.x2)]
    )
    return w.apply_s(x0) - w.c


def solve_with_restart(
    e1: Ellipsoid,
    e2: Ellipsoid,
    opts: Optional[NonconvexSolverOptions] = None,
) -> SolveReport:
    """
    Nonconvex ADMM with one reflection restart.

    Runs from the default start; unless the boundaries were found to meet
    (distance below epsilon0), reruns from the reflected start with zero
    multipliers and returns the closer of the two results (ties go to the
    first run).
    """
    opts = opts or NonconvexSolverOptions()
    first = solve_nonconvex(e1, e2, opts)
    if first.distance < opts.epsilon0:
        first.diagnostics["restarted"] = False
        first.solver = "admm-nc-restart"
        return first

    w = whiten(e1, e2)
    y0 = restart_point(w, e1, e2, first)
    second = solve_nonconvex(e1, e2, opts, y0=y0, lambda0=np.zeros(2 * w.d))

    best = first if first.distance <= second.distance else second
    logger.info(
        f"admm-nc-restart: first run {first.distance:.10g}, restarted run {second.distance:.10g}"
    )
    return dataclasses.replace(
        best,
        solver="admm-nc-restart",
        diagnostics={
            **best.diagnostics,
            "restarted": True,
            "first_distance": first.distance,
            "second_distance": second.distance,
            "chosen_run": 1 if best is first else 2,
            "total_iterations": first.iterations + second.iterations,
        },
    )
