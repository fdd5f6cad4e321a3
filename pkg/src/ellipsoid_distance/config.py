"""
Configuration - Solver Settings and Config Files

Config files are YAML (JSON files load too, JSON being a subset of YAML)
with keys named after the command-line flags. Keys may be grouped under
the sections "solver", "sweep" and "instance"; sections are flattened on
load. Precedence is: built-in defaults < config file < command-line flags.
"""

import argparse
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import yaml

from ellipsoid_distance.exceptions import ConfigError
from ellipsoid_distance.solvers.admm_convex import ConvexSolverOptions
from ellipsoid_distance.solvers.admm_nonconvex import NonconvexSolverOptions, UpdateRule

logger = logging.getLogger(__name__)

SECTIONS = ("solver", "sweep", "instance")

# Flag names (dest form) accepted in config files
KNOWN_KEYS = frozenset(
    {
        # instance selection
        "d",
        "seed",
        "protocol",
        "analytic",
        "instance",
        "form",
        # solver
        "solver",
        "eps",
        "tau0",
        "eta",
        "beta",
        "kappa",
        "max_iters",
        "update_rule",
        "no_restart",
        "tol_feas",
        "delta",
        "reduced_system",
        "combined_criterion",
        "tau_max",
        # sweeps and output
        "count",
        "out",
        "format",
        "workers",
        "multiprocessing",
    }
)


@dataclass
class SolverSettings:
    """
    Flat solver settings shared by all solvers.

    Fields left as None fall back to the defaults of the solver that
    consumes them (the convex and nonconvex defaults differ).
    """

    epsilon: Optional[float] = None
    tau0: Optional[float] = None
    eta: Optional[float] = None
    beta: Optional[float] = None
    kappa: Optional[float] = None
    max_iterations: Optional[int] = None
    update_rule: str = UpdateRule.HEURISTIC.value
    restart: bool = True
    tol_feas: float = 1e-6
    delta: Optional[float] = None
    use_reduced_system: bool = False
    combined_criterion: bool = False
    tau_max: Optional[float] = None

    def _provided(self, **fields: Optional[Any]) -> Dict[str, Any]:
        return {key: value for key, value in fields.items() if value is not None}

    def to_convex_options(self, adaptive: bool) -> ConvexSolverOptions:
        return ConvexSolverOptions(
            adaptive=adaptive,
            use_reduced_system=self.use_reduced_system,
            **self._provided(
                epsilon=self.epsilon,
                tau0=self.tau0,
                eta=self.eta,
                max_iterations=self.max_iterations,
                delta=self.delta,
            ),
        )

    def to_nonconvex_options(self) -> NonconvexSolverOptions:
        try:
            rule = UpdateRule(self.update_rule)
        except ValueError as e:
            raise ConfigError(f"unknown update rule {self.update_rule!r}") from e

        return NonconvexSolverOptions(
            update_rule=rule,
            combined_criterion=self.combined_criterion,
            **self._provided(
                epsilon=self.epsilon,
                epsilon0=self.epsilon,
                tau0=self.tau0,
                eta=self.eta,
                beta=self.beta,
                kappa=self.kappa,
                max_iterations=self.max_iterations,
                tau_max=self.tau_max,
            ),
        )

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> "SolverSettings":
        """Build settings from parsed command-line arguments."""

        def get(name: str) -> Any:
            return getattr(args, name, None)

        max_iters = get("max_iters")
        return cls(
            epsilon=get("eps"),
            tau0=get("tau0"),
            eta=get("eta"),
            beta=get("beta"),
            kappa=get("kappa"),
            max_iterations=int(max_iters) if max_iters is not None else None,
            update_rule=get("update_rule") or UpdateRule.HEURISTIC.value,
            restart=not bool(get("no_restart")),
            tol_feas=get("tol_feas") if get("tol_feas") is not None else 1e-6,
            delta=get("delta"),
            use_reduced_system=bool(get("reduced_system")),
            combined_criterion=bool(get("combined_criterion")),
            tau_max=get("tau_max"),
        )


def _flatten(data: Mapping[str, Any]) -> Dict[str, Any]:
    flat: Dict[str, Any] = {}
    for key, value in data.items():
        name = str(key).replace("-", "_")
        if name in SECTIONS and isinstance(value, Mapping):
            flat.update(_flatten(value))
        else:
            flat[name] = value
    return flat


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Load and validate a config file.

    Raises:
        ConfigError: If the file is unreadable, malformed or has unknown keys
    """
    path = Path(path)
    try:
        with open(path) as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"invalid config file {path}: {e}") from e

    if data is None:
        return {}
    if not isinstance(data, Mapping):
        raise ConfigError(f"config file {path} must contain a mapping")

    values = _flatten(data)
    unknown = sorted(set(values) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config key(s) in {path}: {', '.join(unknown)}")

    logger.debug(f"Loaded {len(values)} setting(s) from {path}")
    return values


def apply_config(args: argparse.Namespace, values: Mapping[str, Any]) -> argparse.Namespace:
    """Fill arguments the user did not pass on the command line from a config mapping."""
    for key, value in values.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    return args
