"""Built-in example surfaces, stored as surface files under ``data/``."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from typing import List

from .errors import UnknownName
from .numeric import Vec2
from .surface import PolygonPresentation, Triangulation, parse_surface, triangulate

_NAMES = (
    "x10",
    "maxratio-h11",
    "equilateral-h2",
    "genus3-15",
    "genus4-21",
    "genus5-27",
    "hyperelliptic-g2",
    "hyperelliptic-g3",
    "hyperelliptic-g4",
    "hyperelliptic-g5",
    "hyperelliptic-g6",
    "square-torus",
    "hex-torus",
)


def catalog_names() -> List[str]:
    return list(_NAMES)


def catalog_text(name: str) -> str:
    if name not in _NAMES:
        raise UnknownName(f"no catalog surface named {name!r}")
    return resources.files("flatsys").joinpath("data", f"{name}.surf").read_text()


@lru_cache(maxsize=None)
def _presentation(name: str) -> PolygonPresentation:
    return parse_surface(catalog_text(name))


def catalog_presentation(name: str) -> PolygonPresentation:
    return _presentation(name)


def catalog(name: str) -> Triangulation:
    """Fresh triangulation of a catalog surface (identical on every call)."""
    return triangulate(_presentation(name))


def slit_tori_presentation(slit: float = 0.4, name: str = "slit-tori") -> PolygonPresentation:
    """Two unit square tori, each cut along a horizontal slit of length
    ``slit`` starting at the lattice point, glued crosswise along the slits.

    The two slit sides form a separating closed geodesic of length
    ``2 * slit``; the slit endpoints become two cone points of angle 4pi.
    """
    if not 0 < slit < 1:
        raise ValueError("slit length must lie strictly between 0 and 1")
    pts = [Vec2(0.0, 0.0), Vec2(slit, 0.0), Vec2(1.0, 0.0), Vec2(1.0, 1.0),
           Vec2(slit, 1.0), Vec2(0.0, 1.0)]
    polys = {"A": list(pts), "B": list(pts)}
    glue = []
    for p in ("A", "B"):
        glue.append(((p, 1), (p, 3)))
        glue.append(((p, 2), (p, 5)))
    glue.append((("A", 0), ("B", 4)))
    glue.append((("B", 0), ("A", 4)))
    return PolygonPresentation(name, polys, glue)


def slit_tori(slit: float = 0.4) -> Triangulation:
    return triangulate(slit_tori_presentation(slit))
