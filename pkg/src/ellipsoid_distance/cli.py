"""
Command-Line Interface for Ellipsoid Distance

Subcommands:
    solve      Solve one instance and print its RunRecord as JSON
    benchmark  Seeded sweep over dimensions and solvers, written as CSV/JSON
    verify     Cross-check solvers instance by instance
    gen        Write a generated or analytic instance file

Exit codes: 0 success, 1 non-convergence, 2 input error, 3 degenerate
global instance.
"""

import argparse
import json
import logging
import math
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ellipsoid_distance.config import SolverSettings, apply_config, load_config_file
from ellipsoid_distance.data_generation import ANALYTIC_CATALOG, InstanceSpec, Protocol
from ellipsoid_distance.evaluation import RunRecord
from ellipsoid_distance.exceptions import (
    ConfigError,
    DegeneratePencil,
    EllipsoidDistanceError,
    NoFeasibleCandidate,
)
from ellipsoid_distance.experiments import (
    BenchmarkExperiment,
    ExperimentConfig,
    VerificationExperiment,
)
from ellipsoid_distance.geometry import Ellipsoid, load_instance, save_instance
from ellipsoid_distance.geometry.instance_io import FORMS, instance_to_dict
from ellipsoid_distance.solvers import SolveStatus
from ellipsoid_distance.solvers.registry import SOLVER_NAMES, run_solver

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NOT_CONVERGED = 1
EXIT_INPUT_ERROR = 2
EXIT_DEGENERATE = 3

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Applied after the config file, for options still unset
DEFAULTS: Dict[str, Dict[str, Any]] = {
    "solve": {"seed": 0, "solver": "sa-admm", "d": [2]},
    "benchmark": {
        "protocol": Protocol.CONVEX_UNIFORM.value,
        "d": [10, 20],
        "count": 10,
        "seed": 0,
        "solver": ["admm", "sa-admm"],
        "format": "csv",
        "out": "results/benchmark.csv",
    },
    "verify": {
        "protocol": Protocol.NONCONVEX_NESTED.value,
        "d": [5],
        "count": 100,
        "seed": 0,
        "format": "csv",
        "out": "results/verify.csv",
    },
    "gen": {"protocol": Protocol.CONVEX_UNIFORM.value, "d": [2], "seed": 0, "form": "ellipsoid"},
}


def configure_logging(verbose: bool = False) -> None:
    """Log to stderr; stdout carries command output."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format=LOG_FORMAT,
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


def _flag(parser: Any, *names: str, help: str) -> None:
    """Boolean switch whose unset value is None, so config files can set it."""
    parser.add_argument(*names, action="store_const", const=True, default=None, help=help)


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", "-c", type=Path, help="YAML or JSON config file")
    parser.add_argument("--verbose", "-v", action="store_true", help="Enable verbose logging")


def _add_solver_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("solver options")
    group.add_argument("--eps", type=float, help="Residual tolerance (default: 1e-6)")
    group.add_argument("--tau0", type=float, help="Initial penalty (convex 1, nonconvex 10)")
    group.add_argument("--eta", type=float, help="Penalty factor (convex 0.1, nonconvex 0.99)")
    group.add_argument("--beta", type=float, help="Penalty growth factor (default: 2)")
    group.add_argument("--kappa", type=float, help="Heuristic rule floor (default: 0.1)")
    group.add_argument("--max-iters", type=int, help="Iteration limit (default: 1e6)")
    group.add_argument("--delta", type=float, help="Boundary check separation (default: 1e-8)")
    group.add_argument("--tau-max", type=float, help="Nonconvex penalty ceiling (default: 1e12)")
    group.add_argument("--tol-feas", type=float, help="Global feasibility tolerance")
    group.add_argument(
        "--update-rule",
        choices=["heuristic", "theoretical"],
        help="Nonconvex penalty rule (default: heuristic)",
    )
    _flag(group, "--no-restart", help="admm-nc-restart runs a single pass")
    _flag(group, "--reduced-system", help="Solve the x-step through the d x d reduced system")
    _flag(group, "--combined-criterion", help="Stacked infeasibility test for the heuristic rule")


def _add_instance_options(parser: argparse.ArgumentParser, sweep: bool = False) -> None:
    group = parser.add_argument_group("instance options")
    if not sweep:
        source = group.add_mutually_exclusive_group()
        source.add_argument("--instance", "-i", type=Path, help="Instance file (JSON)")
        source.add_argument(
            "--analytic", choices=sorted(ANALYTIC_CATALOG), help="Analytic catalog instance"
        )
        source.add_argument(
            "--gen",
            "--protocol",
            dest="protocol",
            choices=[Protocol.CONVEX_UNIFORM.value, Protocol.NONCONVEX_NESTED.value],
            help="Generate a seeded instance",
        )
    else:
        group.add_argument(
            "--protocol",
            "--gen",
            dest="protocol",
            choices=[p.value for p in Protocol],
            help="Instance protocol",
        )
    group.add_argument("--d", type=int, nargs="+", help="Dimension(s)")
    group.add_argument("--seed", type=int, help="Seed (first seed of a sweep)")


def setup_parser() -> argparse.ArgumentParser:
    """
    Set up command-line argument parser.

    Returns:
        Configured ArgumentParser
    """
    parser = argparse.ArgumentParser(
        prog="ellipsoid-distance",
        description="Ellipsoid Distance - ADMM and global solvers for ellipsoid distance problems",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")

    solve = subparsers.add_parser("solve", help="Solve one instance")
    _add_instance_options(solve)
    solve.add_argument("--solver", "-s", choices=SOLVER_NAMES, help="Solver (default: sa-admm)")
    solve.add_argument("--out", "-o", type=Path, help="Also write the record to this file")
    _add_solver_options(solve)
    _add_common_options(solve)

    benchmark = subparsers.add_parser("benchmark", help="Seeded benchmark sweep")
    _add_instance_options(benchmark, sweep=True)
    benchmark.add_argument("--count", "-n", type=int, help="Instances per dimension (default: 10)")
    benchmark.add_argument("--solver", "-s", nargs="+", choices=SOLVER_NAMES, help="Solvers")
    benchmark.add_argument("--out", "-o", type=Path, help="Output table")
    benchmark.add_argument("--format", choices=["csv", "json"], help="Table format (default: csv)")
    _flag(benchmark, "--multiprocessing", "-mp", help="Run instances in a process pool")
    benchmark.add_argument("--workers", "-w", type=int, help="Worker processes (default: CPUs)")
    _add_solver_options(benchmark)
    _add_common_options(benchmark)

    verify = subparsers.add_parser("verify", help="Cross-check solvers")
    _add_instance_options(verify, sweep=True)
    verify.add_argument("--count", "-n", type=int, help="Instances (default: 100)")
    verify.add_argument("--out", "-o", type=Path, help="Output table")
    verify.add_argument("--format", choices=["csv", "json"], help="Table format (default: csv)")
    _flag(verify, "--multiprocessing", "-mp", help="Run instances in a process pool")
    verify.add_argument("--workers", "-w", type=int, help="Worker processes (default: CPU count)")
    _add_solver_options(verify)
    _add_common_options(verify)

    gen = subparsers.add_parser("gen", help="Write an instance file")
    _add_instance_options(gen)
    gen.add_argument("--form", choices=FORMS, help="Instance layout (default: ellipsoid)")
    gen.add_argument("--out", "-o", type=Path, help="Output file (default: stdout)")
    _add_common_options(gen)

    return parser


def resolve_arguments(args: argparse.Namespace) -> argparse.Namespace:
    """
    Apply the config file and the per-command defaults to unset arguments.

    Raises:
        ConfigError: For an invalid config file or inconsistent values
    """
    if args.config is not None:
        apply_config(args, load_config_file(args.config))
    apply_config(args, DEFAULTS[args.command])

    args.d = _as_list(args.d, int, "d")
    if getattr(args, "solver", None) is not None:
        args.solver = _as_list(args.solver, str, "solver")
    return args


def _as_list(value: Any, kind: type, name: str) -> List[Any]:
    values = value if isinstance(value, (list, tuple)) else [value]
    try:
        return [kind(v) for v in values]
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid value for {name}: {value!r}") from e


def _single(values: Sequence[Any], name: str) -> Any:
    if len(values) != 1:
        raise ConfigError(f"{name} takes a single value here, got {list(values)}")
    return values[0]


def _clean(value: Any) -> Any:
    if isinstance(value, float) and math.isnan(value):
        return None
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_clean(v) for v in value]
    return value


def _instance_from_args(args: argparse.Namespace) -> Tuple[Ellipsoid, Ellipsoid, str, str, int]:
    """Returns (e1, e2, protocol, label, d)."""
    d = _single(args.d, "d")
    if args.instance is not None:
        e1, e2 = load_instance(args.instance)
        return e1, e2, "file", str(args.instance), e1.d
    if args.analytic is not None:
        spec = InstanceSpec(d, 0, Protocol.ANALYTIC, args.analytic)
    elif args.protocol is not None:
        spec = InstanceSpec(d, args.seed, Protocol(args.protocol))
    else:
        raise ConfigError("choose an instance with --instance, --analytic or --gen")
    e1, e2 = spec.build()
    return e1, e2, spec.protocol.value, spec.label, spec.d


def run_solve(args: argparse.Namespace) -> int:
    """
    Solve one instance and print its RunRecord.

    Returns:
        Exit code
    """
    solver = _single(args.solver, "solver")
    e1, e2, protocol, label, d = _instance_from_args(args)
    settings = SolverSettings.from_namespace(args)

    start = time.perf_counter()
    try:
        report = run_solver(solver, e1, e2, settings)
    except (NoFeasibleCandidate, DegeneratePencil) as e:
        logger.error(f"{solver}: {e}")
        record = RunRecord.failure(
            protocol, d, args.seed, solver, str(e), time.perf_counter() - start, label
        )
        _emit(record.to_dict(), args.out)
        return EXIT_DEGENERATE

    elapsed = time.perf_counter() - start
    record = RunRecord.from_report(report, protocol, d, args.seed, elapsed, label)
    payload = record.to_dict()
    payload["x1"] = report.x1.tolist()
    payload["x2"] = report.x2.tolist()
    payload["diagnostics"] = {k: v for k, v in report.diagnostics.items() if _is_plain(v)}
    _emit(payload, args.out)

    if report.status == SolveStatus.CONVERGED:
        return EXIT_OK
    if report.status == SolveStatus.DEGENERATE and solver == "global":
        return EXIT_DEGENERATE
    return EXIT_NOT_CONVERGED


def _is_plain(value: Any) -> bool:
    return isinstance(value, (bool, int, float, str)) or value is None


def _emit(payload: Dict[str, Any], out: Optional[Path]) -> None:
    text = json.dumps(_clean(payload), indent=2)
    print(text)
    if out is not None:
        out = Path(out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text + "\n")


def _experiment_config(args: argparse.Namespace, name: str) -> ExperimentConfig:
    out = Path(args.out)
    return ExperimentConfig(
        name=name,
        output_dir=out.parent,
        use_multiprocessing=bool(args.multiprocessing),
        max_workers=args.workers,
        show_progress=not args.verbose,
        settings=SolverSettings.from_namespace(args),
        output_path=out,
        output_format=args.format,
    )


def run_benchmark(args: argparse.Namespace) -> int:
    """
    Run the benchmark sweep.

    Returns:
        Exit code
    """
    logger.info("=" * 60)
    logger.info(f"BENCHMARK: protocol {args.protocol}, d = {args.d}")
    logger.info("=" * 60)

    experiment = BenchmarkExperiment(
        config=_experiment_config(args, "benchmark"),
        protocol=Protocol(args.protocol),
        dimensions=args.d,
        count=args.count,
        solvers=args.solver,
        seed=args.seed,
    )
    results = experiment.run()

    if results.success:
        logger.info("✓ Benchmark completed successfully")
        for path in results.output_paths:
            logger.info(f"  Written: {path}")
        return EXIT_OK

    logger.error(f"✗ Benchmark failed: {results.error}")
    return EXIT_NOT_CONVERGED


def run_verify(args: argparse.Namespace) -> int:
    """
    Run the verification sweep and print its summary.

    Returns:
        Exit code, 1 if any instance disagrees
    """
    d = _single(args.d, "d")
    logger.info("=" * 60)
    logger.info(f"VERIFY: protocol {args.protocol}, d = {d}, {args.count} instance(s)")
    logger.info("=" * 60)

    experiment = VerificationExperiment(
        config=_experiment_config(args, "verify"),
        protocol=Protocol(args.protocol),
        d=d,
        count=args.count,
        seed=args.seed,
    )
    results = experiment.run()

    if not results.success:
        logger.error(f"✗ Verification failed: {results.error}")
        return EXIT_NOT_CONVERGED

    print(json.dumps(_clean(results.statistics), indent=2))
    if results.statistics["disagreements"]:
        logger.error(f"✗ {results.statistics['disagreements']} disagreement(s)")
        return EXIT_NOT_CONVERGED

    logger.info("✓ All compared instances agree")
    return EXIT_OK


def run_gen(args: argparse.Namespace) -> int:
    """
    Write an instance file (or print it).

    Returns:
        Exit code
    """
    e1, e2, protocol, label, d = _instance_from_args(args)
    metadata = {"protocol": protocol, "label": label, "d": d, "seed": args.seed}
    if args.analytic is not None:
        metadata = {"protocol": protocol, "label": label, "d": d, "name": args.analytic}

    if args.out is None:
        print(json.dumps(instance_to_dict(e1, e2, args.form, metadata), indent=2))
    else:
        save_instance(args.out, e1, e2, args.form, metadata)
    return EXIT_OK


COMMANDS = {
    "solve": run_solve,
    "benchmark": run_benchmark,
    "verify": run_verify,
    "gen": run_gen,
}


def main(argv: Optional[Sequence[str]] = None) -> None:
    """Main CLI entry point."""
    parser = setup_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        sys.exit(EXIT_INPUT_ERROR)

    configure_logging(args.verbose)

    try:
        resolve_arguments(args)
        code = COMMANDS[args.command](args)
    except EllipsoidDistanceError as e:
        logger.error(f"✗ {e}")
        code = EXIT_INPUT_ERROR
    except ValueError as e:
        logger.error(f"✗ invalid input: {e}")
        code = EXIT_INPUT_ERROR

    sys.exit(code)


if __name__ == "__main__":
    main()
