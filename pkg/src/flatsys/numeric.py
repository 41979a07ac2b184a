"""Planar vectors and tolerance-aware predicates.

All lengths are compared against a single process-wide tolerance ``eps``
(default 1e-9, overridable through the ``FLATSYS_EPS`` environment variable or
:func:`set_eps`).  Predicates scale ``eps`` by the magnitude of their inputs so
that they stay unit consistent.
"""

from __future__ import annotations

import math
import os
from typing import NamedTuple

from .errors import DegenerateTriangle, ZeroVector

TWO_PI = 2.0 * math.pi

_DEFAULT_EPS = 1e-9
_eps = float(os.environ.get("FLATSYS_EPS", _DEFAULT_EPS))
if not _eps > 0:
    raise ValueError("FLATSYS_EPS must be positive")


def get_eps() -> float:
    return _eps


def set_eps(value: float) -> float:
    """Set the global tolerance and return the previous value."""
    global _eps
    value = float(value)
    if not value > 0:
        raise ValueError("eps must be positive")
    old, _eps = _eps, value
    return old


class Vec2(NamedTuple):
    x: float
    y: float

    def __add__(self, other):
        return Vec2(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Vec2(self.x - other[0], self.y - other[1])

    def __neg__(self):
        return Vec2(-self.x, -self.y)

    def __mul__(self, k):
        return Vec2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __truediv__(self, k):
        return Vec2(self.x / k, self.y / k)

    def dot(self, other) -> float:
        return self.x * other[0] + self.y * other[1]

    def cross(self, other) -> float:
        return self.x * other[1] - self.y * other[0]

    def length(self) -> float:
        return math.hypot(self.x, self.y)

    def angle(self) -> float:
        """Direction in [0, 2pi)."""
        a = math.atan2(self.y, self.x)
        if a < 0:
            a += TWO_PI
        # a tiny negative angle rounds up to 2pi
        return 0.0 if a >= TWO_PI else a

    def rotate(self, theta: float) -> "Vec2":
        c, s = math.cos(theta), math.sin(theta)
        return Vec2(c * self.x - s * self.y, s * self.x + c * self.y)


def _scale(*pts) -> float:
    return max(1.0, max(max(abs(p[0]), abs(p[1])) for p in pts))


def orientation(a, b, c) -> int:
    """Sign of (b - a) x (c - a); zero within ``eps * max(1, scale**2)``."""
    cr = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    s = _scale(a, b, c)
    if abs(cr) <= _eps * s * s:
        return 0
    return 1 if cr > 0 else -1


def circle_power(a, b, c, d) -> float:
    """Power of ``d`` with respect to the circumcircle of (a, b, c).

    Positive inside, negative outside; units of length squared.  Requires a
    nondegenerate triangle.
    """
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]
    det = (
        (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
        - (bdx * bdx + bdy * bdy) * (adx * cdy - cdx * ady)
        + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady)
    )
    orient = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return det / orient


def in_circumcircle(a, b, c, d) -> int:
    """+1 if d is strictly inside the circumcircle of ccw (a, b, c), -1 if
    strictly outside, 0 if cocircular within tolerance.

    The tolerance is applied to the circle power (length squared).
    """
    if orientation(a, b, c) <= 0:
        raise DegenerateTriangle("in_circumcircle needs a counterclockwise triangle")
    p = circle_power(a, b, c, d)
    s = _scale(a, b, c, d)
    if abs(p) <= _eps * s * s:
        return 0
    return 1 if p > 0 else -1


def angle_ccw(u, v) -> float:
    """Counterclockwise angle from u to v, in [0, 2pi)."""
    lu = math.hypot(u[0], u[1])
    lv = math.hypot(v[0], v[1])
    if lu <= _eps or lv <= _eps:
        raise ZeroVector("angle of a zero vector")
    cr = u[0] * v[1] - u[1] * v[0]
    dt = u[0] * v[0] + u[1] * v[1]
    a = math.atan2(cr, dt)
    if a < 0:
        a += TWO_PI
    if a >= TWO_PI - 1e-15 or (abs(cr) <= _eps * lu * lv and dt > 0):
        return 0.0
    return a


def close(a: float, b: float, scale: float = 1.0) -> bool:
    return abs(a - b) <= _eps * max(1.0, abs(scale))
