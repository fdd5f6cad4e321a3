"""
Evaluation Module

Run records written by the CLI and the sweeps, and summary statistics.
"""

from ellipsoid_distance.evaluation.metrics import Statistics, calculate_statistics
from ellipsoid_distance.evaluation.records import (
    FAILED_STATUS,
    RunRecord,
    read_records,
    records_to_frame,
    sort_records,
    write_records,
)

__all__ = [
    "FAILED_STATUS",
    "RunRecord",
    "Statistics",
    "calculate_statistics",
    "read_records",
    "records_to_frame",
    "sort_records",
    "write_records",
]
