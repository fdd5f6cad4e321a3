"""
Unit tests for run records and their CSV/JSON tables.
"""

import json
import math
import tempfile
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from ellipsoid_distance.evaluation import (
    FAILED_STATUS,
    RunRecord,
    read_records,
    records_to_frame,
    sort_records,
    write_records,
)
from ellipsoid_distance.solvers import Residuals, SolveReport, SolveStatus


def make_record(d: int, seed: int, solver: str, distance: float = 1.5) -> RunRecord:
    return RunRecord(
        protocol="convex",
        d=d,
        seed=seed,
        solver=solver,
        distance=distance,
        iterations=10 * d + seed,
        penalty_updates=2,
        wall_time=0.01,
        status="Converged",
        rx=1e-7,
        ry=2e-7,
        rc=3e-7,
        instance=f"convex:d{d}:s{seed}",
    )


class TestRunRecord:
    """Test suite for RunRecord."""

    def test_from_report(self):
        """Fields are copied from the report."""
        report = SolveReport(
            x1=np.array([1.0, 0.0]),
            x2=np.array([9.0, 0.0]),
            status=SolveStatus.CONVERGED,
            iterations=17,
            final_residuals=Residuals(1e-7, 2e-7, 3e-7),
            penalty_log=[(1, 2.0), (2, 4.0)],
            solver="sa-admm",
        )

        record = RunRecord.from_report(report, "analytic", 2, 0, wall_time=0.5)

        assert record.distance == 8.0
        assert record.iterations == 17
        assert record.penalty_updates == 2
        assert record.status == "Converged"
        assert record.solver == "sa-admm"
        assert record.rc == 3e-7

    def test_from_degenerate_report(self):
        """Reports without residuals leave them NaN."""
        report = SolveReport.degenerate(2, "global", "singular pencil")

        record = RunRecord.from_report(report, "analytic", 2, 0, wall_time=0.0)

        assert record.status == "Degenerate"
        assert math.isnan(record.distance)
        assert math.isnan(record.rx)

    def test_failure(self):
        """Failure rows carry the error text."""
        record = RunRecord.failure("nonconvex", 3, 4, "global", "no feasible candidate")

        assert record.status == FAILED_STATUS
        assert record.error == "no feasible candidate"
        assert math.isnan(record.distance)

    def test_sort_order(self):
        """Rows sort by (d, seed, solver)."""
        records = [
            make_record(3, 0, "admm"),
            make_record(2, 1, "sa-admm"),
            make_record(2, 1, "admm"),
            make_record(2, 0, "sa-admm"),
        ]

        ordered = sort_records(records)

        assert [r.sort_key for r in ordered] == [
            (2, 0, "sa-admm"),
            (2, 1, "admm"),
            (2, 1, "sa-admm"),
            (3, 0, "admm"),
        ]


class TestTables:
    """Test suite for write_records and read_records."""

    def setup_method(self):
        """Create a temporary directory and a few records."""
        self.temp_dir = tempfile.mkdtemp()
        self.records = [
            make_record(3, 1, "sa-admm"),
            make_record(2, 0, "admm", distance=0.1 + 0.2),
            RunRecord.failure("convex", 2, 0, "sa-admm", "boom"),
        ]

    def teardown_method(self):
        """Clean up temporary files."""
        import shutil

        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_frame_columns(self):
        """The frame has one column per field."""
        frame = records_to_frame(self.records)

        assert isinstance(frame, pd.DataFrame)
        assert list(frame.columns)[:5] == ["protocol", "d", "seed", "solver", "distance"]
        assert len(frame) == 3

    def test_csv(self):
        """CSV tables are sorted and read back."""
        path = write_records(self.records, Path(self.temp_dir) / "runs.csv")

        loaded = read_records(path)

        assert [r.sort_key for r in loaded] == [r.sort_key for r in sort_records(self.records)]
        assert loaded[0].distance == pytest.approx(0.3)
        assert loaded[1].status == FAILED_STATUS
        assert loaded[1].error == "boom"
        assert loaded[0].error is None
        assert math.isnan(loaded[1].distance)

    def test_json_keeps_precision(self):
        """JSON tables keep floats exactly."""
        path = write_records(self.records, Path(self.temp_dir) / "runs.json", fmt="json")

        loaded = read_records(path)

        assert loaded[0].distance == 0.1 + 0.2
        assert loaded[2].instance == "convex:d3:s1"

    def test_json_failed_rows_use_null(self):
        """Failed rows are written with null, not NaN, and read back as NaN."""
        path = write_records(self.records, Path(self.temp_dir) / "runs.json", fmt="json")

        def reject(token):
            raise ValueError(f"non-standard JSON constant {token}")

        rows = json.loads(path.read_text(), parse_constant=reject)
        failed = next(row for row in rows if row["status"] == FAILED_STATUS)
        assert failed["distance"] is None
        assert failed["rx"] is None

        loaded = read_records(path)
        assert math.isnan(loaded[1].distance)
        assert math.isnan(loaded[1].rc)

    def test_creates_parent_directory(self):
        """Missing parent directories are created."""
        path = Path(self.temp_dir) / "nested" / "out" / "runs.csv"

        write_records(self.records, path)

        assert path.exists()

    def test_unknown_format(self):
        """Only csv and json are supported."""
        with pytest.raises(ValueError):
            write_records(self.records, Path(self.temp_dir) / "runs.xml", fmt="xml")
