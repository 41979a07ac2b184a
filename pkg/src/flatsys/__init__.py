"""Systoles of translation surfaces: Delaunay decompositions, saddle
connections, cylinders and homotopy classes of shortest loops."""

from .errors import FlatSysError
from .numeric import Vec2, get_eps, set_eps
from .surface import (
    PolygonPresentation,
    Triangulation,
    from_permutations,
    parse_surface,
    triangulate,
)
from .catalog import catalog, catalog_names

__version__ = "0.1.0"

__all__ = [
    "FlatSysError",
    "PolygonPresentation",
    "Triangulation",
    "Vec2",
    "catalog",
    "catalog_names",
    "from_permutations",
    "get_eps",
    "parse_surface",
    "set_eps",
    "triangulate",
]
