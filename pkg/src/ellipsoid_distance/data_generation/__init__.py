"""
Data Generation Module

Seeded instance generators for the convex and nonconvex protocols and the
analytic catalog used as a test oracle.
"""

from ellipsoid_distance.data_generation.instance_generator import (
    ANALYTIC_CATALOG,
    AnalyticInstance,
    InstanceGenerator,
    InstanceSpec,
    Protocol,
    analytic_instance,
    gen_convex,
    gen_nonconvex,
)

__all__ = [
    "ANALYTIC_CATALOG",
    "AnalyticInstance",
    "InstanceGenerator",
    "InstanceSpec",
    "Protocol",
    "analytic_instance",
    "gen_convex",
    "gen_nonconvex",
]
