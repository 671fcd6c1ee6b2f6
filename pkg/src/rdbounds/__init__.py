"""Exact bounding functions for resolvent degree, polar cones and plane finding."""

__version__ = "0.1.0"

from .bounds import F, G, Phi, phi, psi, theta  # noqa: E402
from .polar import HSystem, IntersectionType, cone_system, cone_type, cone_type_chain, contains_plane  # noqa: E402
from .poly import FieldTag, HPoly, PPoint, polar  # noqa: E402

__all__ = [
    "__version__", "F", "G", "Phi", "phi", "psi", "theta",
    "HSystem", "IntersectionType", "cone_system", "cone_type", "cone_type_chain", "contains_plane",
    "FieldTag", "HPoly", "PPoint", "polar",
]
