"""Geometry and metrology checks for Fourth-Dynasty pyramid measurements."""

from .classical import (
    archimedes_limit_check,
    consecutive_leg_triples,
    cubature_radius_egyptian,
    cubature_radius_exact,
    duplication_check,
    sphere_metrics,
    trisect_iterative,
)
from .geom import Angle, Circle, Line, Point, Tolerance, dms

__version__ = "0.1.0"

__all__ = [
    "Angle",
    "Circle",
    "Line",
    "Point",
    "Tolerance",
    "archimedes_limit_check",
    "consecutive_leg_triples",
    "cubature_radius_egyptian",
    "cubature_radius_exact",
    "dms",
    "duplication_check",
    "sphere_metrics",
    "trisect_iterative",
]
