"""
Geometry Module

Ellipsoid types, general-quadric conversion, whitening, boundary range
queries and the JSON instance format.
"""

from ellipsoid_distance.geometry.boundary import (
    QuadraticRange,
    boundary_intersection,
    boundary_quadratic_range,
    is_contained,
)
from ellipsoid_distance.geometry.ellipsoid import (
    Ellipsoid,
    GeneralQuadric,
    WhitenedPair,
    boundary_point,
    constraint_value,
    from_general_quadric,
    reflect_through_center,
    to_general_quadric,
    whiten,
)
from ellipsoid_distance.geometry.instance_io import (
    instance_to_dict,
    load_instance,
    parse_instance,
    save_instance,
)

__all__ = [
    "Ellipsoid",
    "GeneralQuadric",
    "QuadraticRange",
    "WhitenedPair",
    "boundary_intersection",
    "boundary_point",
    "boundary_quadratic_range",
    "constraint_value",
    "from_general_quadric",
    "instance_to_dict",
    "is_contained",
    "load_instance",
    "parse_instance",
    "reflect_through_center",
    "save_instance",
    "to_general_quadric",
    "whiten",
]
