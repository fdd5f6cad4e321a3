"""
Solver Registry - Named Entry Points Used by the CLI and the Sweeps
"""

from typing import Callable, Dict, Optional

from ellipsoid_distance.config import SolverSettings
from ellipsoid_distance.exceptions import ConfigError
from ellipsoid_distance.geometry.ellipsoid import Ellipsoid
from ellipsoid_distance.solvers.admm_convex import solve_convex
from ellipsoid_distance.solvers.admm_nonconvex import solve_nonconvex, solve_with_restart
from ellipsoid_distance.solvers.global_kkt import solve_global
from ellipsoid_distance.solvers.report import SolveReport

SOLVER_NAMES = ("admm", "sa-admm", "admm-nc", "admm-nc-restart", "global")
CONVEX_SOLVERS = ("admm", "sa-admm")
BOUNDARY_SOLVERS = ("admm-nc", "admm-nc-restart", "global")


def _admm(e1: Ellipsoid, e2: Ellipsoid, settings: SolverSettings) -> SolveReport:
    return solve_convex(e1, e2, settings.to_convex_options(adaptive=False))


def _sa_admm(e1: Ellipsoid, e2: Ellipsoid, settings: SolverSettings) -> SolveReport:
    return solve_convex(e1, e2, settings.to_convex_options(adaptive=True))


def _admm_nc(e1: Ellipsoid, e2: Ellipsoid, settings: SolverSettings) -> SolveReport:
    return solve_nonconvex(e1, e2, settings.to_nonconvex_options())


def _admm_nc_restart(e1: Ellipsoid, e2: Ellipsoid, settings: SolverSettings) -> SolveReport:
    opts = settings.to_nonconvex_options()
    if not settings.restart:
        return solve_nonconvex(e1, e2, opts)
    return solve_with_restart(e1, e2, opts)


def _global(e1: Ellipsoid, e2: Ellipsoid, settings: SolverSettings) -> SolveReport:
    return solve_global(e1, e2, settings.tol_feas)


_SOLVERS: Dict[str, Callable[[Ellipsoid, Ellipsoid, SolverSettings], SolveReport]] = {
    "admm": _admm,
    "sa-admm": _sa_admm,
    "admm-nc": _admm_nc,
    "admm-nc-restart": _admm_nc_restart,
    "global": _global,
}


def run_solver(
    name: str,
    e1: Ellipsoid,
    e2: Ellipsoid,
    settings: Optional[SolverSettings] = None,
) -> SolveReport:
    """
    Run a solver by name.

    Raises:
        ConfigError: If the name is not registered
    """
    if name not in _SOLVERS:
        raise ConfigError(f"unknown solver {name!r}; choose from {', '.join(SOLVER_NAMES)}")
    report = _SOLVERS[name](e1, e2, settings or SolverSettings())
    report.solver = name
    return report
