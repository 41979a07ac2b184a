"""Straight-line flow through triangles.

Points on the surface are stored as ``(triangle, local)`` where ``local`` is
in the frame of the triangle (slot-0 vertex at the origin).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .numeric import Vec2
from .surface import Triangulation, next_he, prev_he


class HitVertex(Exception):
    """The flow line runs into a vertex of the triangulation."""

    def __init__(self, vertex: int, traveled: float, pieces=None):
        super().__init__(f"flow hit vertex {vertex}")
        self.vertex = vertex
        self.traveled = traveled
        self.pieces = pieces or []


@dataclass
class FlowResult:
    triangle: int
    point: Vec2
    crossed: List[int]  # half-edges crossed, each in the triangle being left
    pieces: List[Tuple[int, Vec2, Vec2]]  # (triangle, entry, exit) per triangle


VERTEX_TOL = 1e-9


def _cross_into(T: Triangulation, w: int, p: Vec2) -> Vec2:
    """Local coordinates, in the triangle across ``w``, of point ``p`` on ``w``."""
    g = T.opp[w]
    b = T.local_start(w) + T.vec[w]
    return T.local_start(g) + (p - b)


def walk(T: Triangulation, t: int, p: Vec2, d: Vec2, length: float,
         skip: Optional[int] = None) -> FlowResult:
    """Flow from ``p`` in triangle ``t`` along unit direction ``d`` for
    ``length``.  ``skip`` is a half-edge of ``t`` the point sits on and must
    not exit through.  Raises HitVertex when the line meets a vertex."""
    crossed: List[int] = []
    pieces: List[Tuple[int, Vec2, Vec2]] = []
    remaining = length
    traveled = 0.0
    steps = 0
    while True:
        steps += 1
        if steps > 100000:
            raise RuntimeError("flow did not terminate")
        best = None
        pts = T.triangle_points(t)
        for k in range(3):
            w = 3 * t + k
            if w == skip:
                continue
            a = pts[k]
            e = T.vec[w]
            den = e.cross(d)
            if den >= -1e-15 * e.length():
                continue  # moving parallel to or into the edge's inner side
            # solve p + s d = a + lam e
            lam = (p - a).cross(d) / den
            s = (a - p).cross(e) / d.cross(e)
            if s < -1e-12:
                continue
            if best is None or s < best[0]:
                best = (s, w, lam)
        if best is None:
            raise RuntimeError("flow found no exit edge")
        s, w, lam = best
        s = max(s, 0.0)
        if s >= remaining:
            q = p + d * remaining
            pieces.append((t, p, q))
            return FlowResult(t, q, crossed, pieces)
        q = p + d * s
        elen = T.vec[w].length()
        tol = VERTEX_TOL * max(1.0, elen)
        if lam * elen <= tol or (1 - lam) * elen <= tol:
            pieces.append((t, p, q))
            v = T.vertex(w) if lam * elen <= tol else T.vertex(next_he(w))
            raise HitVertex(v, traveled + s, pieces)
        pieces.append((t, p, q))
        crossed.append(w)
        remaining -= s
        traveled += s
        p = _cross_into(T, w, q)
        skip = T.opp[w]
        t = skip // 3


def walk_from_vertex(T: Triangulation, h: int, d: Vec2, length: float) -> FlowResult:
    """Flow from the start vertex of ``h`` in unit direction ``d``, which must
    point strictly inside the corner of ``h``."""
    t = h // 3
    p = T.local_start(h)
    w = next_he(h)
    a = T.local_start(w)
    e = T.vec[w]
    s = (a - p).cross(e) / d.cross(e)
    if s >= length:
        q = p + d * length
        return FlowResult(t, q, [], [(t, p, q)])
    q = p + d * s
    elen = e.length()
    lam = (q - a).dot(e) / (elen * elen)
    tol = VERTEX_TOL * max(1.0, elen)
    if lam * elen <= tol or (1 - lam) * elen <= tol:
        v = T.vertex(w) if lam * elen <= tol else T.vertex(next_he(w))
        raise HitVertex(v, s, [(t, p, q)])
    g = T.opp[w]
    try:
        rest = walk(T, g // 3, _cross_into(T, w, q), d, length - s, skip=g)
    except HitVertex as exc:
        raise HitVertex(exc.vertex, s + exc.traveled, [(t, p, q)] + exc.pieces) from None
    return FlowResult(rest.triangle, rest.point, [w] + rest.crossed, [(t, p, q)] + rest.pieces)


def segment_pieces(T: Triangulation, start_corner: int, path, holonomy: Vec2):
    """Per-triangle pieces of a saddle connection given by its crossing path.

    Returns a list of (triangle, a, b) in local coordinates, in order.
    """
    h = start_corner
    t = h // 3
    off = -T.local_start(h)  # position of the slot-0 vertex in the segment frame
    O = Vec2(0.0, 0.0)
    out = []
    params = []
    for w in path:
        # parameter where the segment crosses edge w
        a = off + T.local_start(w)
        e = T.vec[w]
        den = holonomy.cross(e)
        s = a.cross(e) / den
        params.append((t, off, s, w))
        g = T.opp[w]
        off = off + T.local_start(w) + e - T.local_start(g)
        t = g // 3
    s_prev = 0.0
    for (tri, o, s, _w) in params:
        out.append((tri, O + holonomy * s_prev - o, holonomy * s - o))
        s_prev = s
    out.append((t, holonomy * s_prev - off, holonomy - off))
    return out


def point_in_triangle(T: Triangulation, t: int, p: Vec2, tol: float = 1e-9) -> bool:
    a, b, c = T.triangle_points(t)
    for u, v in ((a, b), (b, c), (c, a)):
        e = v - u
        if e.cross(p - u) < -tol * max(1.0, e.length()):
            return False
    return True


def segment_intersection(p: Vec2, q: Vec2, a: Vec2, b: Vec2):
    """Parameters (s, t) with p + s(q-p) = a + t(b-a), or None if parallel."""
    r = q - p
    e = b - a
    den = r.cross(e)
    if abs(den) <= 1e-14 * max(1.0, r.length() * e.length()):
        return None
    s = (a - p).cross(e) / den
    t = (a - p).cross(r) / den
    return s, t


def same_point(T: Triangulation, t1: int, p1: Vec2, t2: int, p2: Vec2, tol: float = 1e-6) -> bool:
    """Whether two located points coincide, allowing either to sit on an
    edge shared by the two triangles."""
    if t1 == t2 and (p1 - p2).length() <= tol:
        return True
    pts = T.triangle_points(t1)
    for k in range(3):
        w = 3 * t1 + k
        if T.opp[w] // 3 != t2:
            continue
        a, e = pts[k], T.vec[w]
        if abs(e.cross(p1 - a)) <= tol * e.length():
            if (_cross_into(T, w, p1) - p2).length() <= tol:
                return True
    return False
