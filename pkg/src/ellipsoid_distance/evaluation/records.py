"""
Run Records - One Row per (Instance, Solver)

RunRecord is the unit written by the solve command and the sweeps. Tables
go through pandas (CSV); JSON goes through the json module so floats keep
their full precision.
"""

import json
import logging
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

import pandas as pd

from ellipsoid_distance.solvers.report import SolveReport

logger = logging.getLogger(__name__)

FAILED_STATUS = "Failed"
FORMATS = ("csv", "json")


@dataclass
class RunRecord:
    """
    Result of one solver on one instance.

    status is a SolveStatus value, or "Failed" with error set when the
    solve raised. Missing numbers are NaN.
    """

    protocol: str
    d: int
    seed: int
    solver: str
    distance: float
    iterations: int
    penalty_updates: int
    wall_time: float
    status: str
    rx: float = math.nan
    ry: float = math.nan
    rc: float = math.nan
    instance: str = ""
    error: Optional[str] = None

    @classmethod
    def from_report(
        cls,
        report: SolveReport,
        protocol: str,
        d: int,
        seed: int,
        wall_time: float,
        instance: str = "",
    ) -> "RunRecord":
        residuals = report.final_residuals
        return cls(
            protocol=protocol,
            d=d,
            seed=seed,
            solver=report.solver,
            distance=report.distance,
            iterations=report.iterations,
            penalty_updates=len(report.penalty_log),
            wall_time=wall_time,
            status=report.status.value,
            rx=residuals.rx if residuals else math.nan,
            ry=residuals.ry if residuals else math.nan,
            rc=residuals.rc if residuals else math.nan,
            instance=instance,
        )

    @classmethod
    def failure(
        cls,
        protocol: str,
        d: int,
        seed: int,
        solver: str,
        error: str,
        wall_time: float = 0.0,
        instance: str = "",
    ) -> "RunRecord":
        return cls(
            protocol=protocol,
            d=d,
            seed=seed,
            solver=solver,
            distance=math.nan,
            iterations=0,
            penalty_updates=0,
            wall_time=wall_time,
            status=FAILED_STATUS,
            instance=instance,
            error=error,
        )

    @property
    def sort_key(self) -> tuple:
        return (self.d, self.seed, self.solver)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunRecord":
        kwargs: Dict[str, Any] = {}
        for f in fields(cls):
            if f.name not in data:
                continue
            value = data[f.name]
            if f.name in ("d", "seed", "iterations", "penalty_updates"):
                value = int(value)
            elif f.name in ("distance", "wall_time", "rx", "ry", "rc"):
                value = math.nan if value is None else float(value)
            elif f.name in ("instance",):
                value = "" if _is_missing(value) else str(value)
            elif f.name == "error":
                value = None if _is_missing(value) else str(value)
            else:
                value = str(value)
            kwargs[f.name] = value
        return cls(**kwargs)


def _is_missing(value: Any) -> bool:
    return value is None or (isinstance(value, float) and math.isnan(value))


def _json_row(record: RunRecord) -> Dict[str, Any]:
    """to_dict with non-finite floats as None (NaN and Infinity are not JSON)."""
    return {
        k: None if isinstance(v, float) and not math.isfinite(v) else v
        for k, v in record.to_dict().items()
    }


def sort_records(records: Iterable[RunRecord]) -> List[RunRecord]:
    """Order rows by (d, seed, solver)."""
    return sorted(records, key=lambda r: r.sort_key)


def records_to_frame(records: Iterable[RunRecord]) -> pd.DataFrame:
    rows = [r.to_dict() for r in records]
    columns = [f.name for f in fields(RunRecord)]
    return pd.DataFrame(rows, columns=columns)


def write_records(records: Iterable[RunRecord], path: Union[str, Path], fmt: str = "csv") -> Path:
    """
    Write records as CSV or JSON.

    Raises:
        ValueError: For an unknown format
    """
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ordered = sort_records(records)

    if fmt == "csv":
        records_to_frame(ordered).to_csv(path, index=False)
    else:
        with open(path, "w") as f:
            json.dump([_json_row(r) for r in ordered], f, indent=2, allow_nan=False)

    logger.info(f"Wrote {len(ordered)} record(s) to {path}")
    return path


def read_records(path: Union[str, Path]) -> List[RunRecord]:
    """Read records written by write_records (format from the file suffix)."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        with open(path) as f:
            rows = json.load(f)
    else:
        frame = pd.read_csv(path, dtype={"instance": "object", "error": "object"})
        rows = frame.to_dict(orient="records")
    return [RunRecord.from_dict(row) for row in rows]
