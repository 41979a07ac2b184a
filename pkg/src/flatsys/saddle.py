"""Saddle connections: straight segments between vertex-set points.

Enumeration unfolds triangles across edges starting from every corner,
keeping the wedge of directions that are still unobstructed.  The search is
depth first; a branch is dropped once its window lies farther than the
length bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from . import numeric
from .errors import BudgetExceeded
from .numeric import TWO_PI, Vec2, angle_ccw
from .surface import Triangulation, next_he, prev_he

DEFAULT_BUDGET = 10_000_000
POS_TOL = 1e-7


@dataclass(frozen=True)
class SaddleConnection:
    start: int
    end: int
    holonomy: Vec2
    path: Tuple[int, ...]  # half-edges crossed, each in the triangle being left
    start_corner: int  # half-edge whose corner contains the initial direction
    end_corner: int  # half-edge whose corner contains the final back direction
    start_pos: float  # angular position of the initial direction at start
    end_pos: float  # angular position of the back direction at end

    @property
    def length(self) -> float:
        return self.holonomy.length()

    @property
    def angle(self) -> float:
        return self.holonomy.angle()

    @property
    def start_sector(self) -> int:
        return self.start_corner

    def sort_key(self):
        return (round(self.length, 9), round(self.angle, 9) % round(TWO_PI, 9), self.start, self.start_pos)


def _norm_pos(T: Triangulation, v: int, pos: float) -> float:
    A = T.vertex_angle(v)
    pos = pos % A
    if A - pos < 1e-10:
        pos = 0.0
    return pos


def _cross_sign(r: Vec2, p: Vec2) -> int:
    """Sign of r x p with a relative tolerance."""
    cr = r.cross(p)
    if abs(cr) <= numeric.get_eps() * r.length() * p.length():
        return 0
    return 1 if cr > 0 else -1


def _ray_line(r: Vec2, p: Vec2, q: Vec2) -> Optional[Vec2]:
    d = q - p
    den = r.cross(d)
    if abs(den) < 1e-300:
        return None
    t = p.cross(d) / den
    return r * t


def _segment_distance(p: Vec2, q: Vec2) -> float:
    d = q - p
    dd = d.dot(d)
    if dd == 0:
        return p.length()
    t = max(0.0, min(1.0, -p.dot(d) / dd))
    return (p + d * t).length()


def _window_distance(p: Vec2, q: Vec2, r1: Vec2, r2: Vec2) -> float:
    """Distance from the origin to the part of segment pq inside the wedge."""
    a = _ray_line(r1, p, q)
    b = _ray_line(r2, p, q)
    if a is None or b is None:
        return _segment_distance(p, q)
    return _segment_distance(a, b)


def _make_sc(T, h, path, n2, c) -> SaddleConnection:
    v0 = T.vertex(h)
    v1 = T.vertex(n2)
    sp = _norm_pos(T, v0, T.position(h, c))
    ep = _norm_pos(T, v1, T.position(n2, -c))
    return SaddleConnection(v0, v1, c, tuple(path), h, n2, sp, ep)


def _edge_sc(T, h) -> SaddleConnection:
    g = T.opp[h]
    return SaddleConnection(
        T.vertex(h), T.vertex(g), T.vec[h], (), h, g,
        _norm_pos(T, T.vertex(h), T.corner_offset(h)),
        _norm_pos(T, T.vertex(g), T.corner_offset(g)),
    )


class _Counter:
    def __init__(self, budget):
        self.budget = budget
        self.n = 0

    def tick(self):
        self.n += 1
        if self.n > self.budget:
            raise BudgetExceeded(f"unfolding exceeded {self.budget} nodes")


def _search_corner(T: Triangulation, h: int, L: float, out: list, counter: _Counter,
                   direction: Optional[Vec2] = None) -> None:
    eps = numeric.get_eps()
    if direction is None and T.vec[h].length() <= L * (1 + eps):
        out.append(_edge_sc(T, h))
    w = next_he(h)
    p1 = T.vec[h]
    p2 = -T.vec[prev_he(h)]
    # offset: position (local frame of the current triangle) of its slot-0 vertex
    off = -T.local_start(h)
    stack = [(w, off, p1, p2, ())]
    while stack:
        w, off, r1, r2, path = stack.pop()
        counter.tick()
        p = off + T.local_start(w)  # cw end of the window
        q = p + T.vec[w]  # ccw end
        if _window_distance(p, q, r1, r2) > L * (1 + eps):
            continue
        if direction is not None:
            if not (_cross_sign(direction, r1) < 0 and _cross_sign(direction, r2) > 0):
                continue
        g = T.opp[w]
        noff = p + T.vec[w] - T.local_start(g)  # start of g sits at q
        ng = next_he(g)
        c = p + T.vec[ng]
        n2 = prev_he(g)
        npath = path + (w,)
        s1 = _cross_sign(r1, c)
        s2 = _cross_sign(c, r2)
        if s1 > 0 and s2 > 0:
            if c.length() <= L * (1 + eps) and (
                direction is None or _cross_sign(direction, c) == 0 and direction.dot(c) > 0
            ):
                out.append(_make_sc(T, h, npath, n2, c))
            stack.append((n2, noff, c, r2, npath))
            stack.append((ng, noff, r1, c, npath))
        elif s1 <= 0:
            stack.append((n2, noff, r1, r2, npath))
        else:
            stack.append((ng, noff, r1, r2, npath))


def enumerate_saddle_connections(T: Triangulation, L: float, budget: int = DEFAULT_BUDGET,
                                 starts=None) -> List[SaddleConnection]:
    """All oriented saddle connections of length at most ``L``, sorted by
    (length, angle).  ``starts`` optionally restricts the start vertices."""
    if not L > 0:
        raise ValueError("length bound must be positive")
    counter = _Counter(budget)
    found: List[SaddleConnection] = []
    for h in range(T.num_half_edges):
        if starts is None or T.vertex(h) in starts:
            _search_corner(T, h, L, found, counter)
    return _dedupe(found)


def _dedupe(found):
    found.sort(key=lambda s: (s.start, s.start_pos, s.length))
    out = []
    for s in found:
        if out and out[-1].start == s.start and abs(out[-1].start_pos - s.start_pos) < POS_TOL \
                and abs(out[-1].length - s.length) < 1e-7 * max(1.0, s.length):
            continue
        out.append(s)
    out.sort(key=SaddleConnection.sort_key)
    return out


def connections_in_direction(T: Triangulation, corner: int, direction: Vec2, L: float,
                             budget: int = DEFAULT_BUDGET) -> List[SaddleConnection]:
    """Saddle connections of length at most ``L`` leaving the corner of
    ``corner`` exactly in ``direction`` (at most one)."""
    counter = _Counter(budget)
    out: List[SaddleConnection] = []
    d = direction / direction.length()
    if _cross_sign(T.vec[corner], d) == 0 and T.vec[corner].dot(d) > 0:
        if T.vec[corner].length() <= L * (1 + numeric.get_eps()):
            out.append(_edge_sc(T, corner))
        return out
    _search_corner(T, corner, L, out, counter, direction=d)
    return out


def trace_ray(T: Triangulation, v: int, pos: float, B: float) -> Optional[SaddleConnection]:
    """Follow the geodesic leaving vertex ``v`` at angular position ``pos``;
    return the saddle connection it forms if it hits the vertex set within
    length ``B``, else None."""
    h, a = T.corner_containing(v, pos)
    d = T.vec[h].rotate(a)
    d = d / d.length()
    if a == 0.0 or _cross_sign(T.vec[h], d) == 0:
        return _edge_sc(T, h) if T.vec[h].length() <= B * (1 + numeric.get_eps()) else None
    res = connections_in_direction(T, h, d, B)
    return res[0] if res else None


def replay(T: Triangulation, sc: SaddleConnection) -> Vec2:
    """Recompute the holonomy of ``sc`` by developing its crossing path."""
    if not sc.path:
        return T.vec[sc.start_corner]
    h = sc.start_corner
    if sc.path[0] != next_he(h):
        raise ValueError("path does not leave the start corner")
    off = -T.local_start(h)
    for w in sc.path:
        g = T.opp[w]
        off = off + T.local_start(w) + T.vec[w] - T.local_start(g)
    return off + T.local_start(sc.end_corner)


def shortest_saddle(T: Triangulation) -> SaddleConnection:
    L = min(T.vec[h].length() for h in T.edges())
    return enumerate_saddle_connections(T, L * (1 + 1e-9))[0]


def directions(scs: Sequence[SaddleConnection], tol: float = 1e-9) -> List[float]:
    """Distinct unoriented directions (angles in [0, pi)), merged within tol."""
    angs = sorted(s.holonomy.angle() % math.pi for s in scs)
    out: List[float] = []
    for a in angs:
        if math.pi - a < tol:
            a = 0.0
        if not any(abs(a - b) < tol or abs(abs(a - b) - math.pi) < tol for b in out):
            out.append(a)
    return sorted(out)


def reverse_index(scs: Sequence[SaddleConnection]) -> List[int]:
    """For each connection, the index of its reverse in the same list
    (-1 if the reverse is not in the list)."""
    by_start: Dict[int, List[Tuple[float, int]]] = {}
    for i, s in enumerate(scs):
        by_start.setdefault(s.start, []).append((s.start_pos, i))
    out = []
    for s in scs:
        j = -1
        for pos, i in by_start.get(s.end, []):
            if _pos_close(pos, s.end_pos) and abs(scs[i].length - s.length) < 1e-7 * max(1, s.length):
                j = i
                break
        out.append(j)
    return out


def _pos_close(a: float, b: float, A: float = None) -> bool:
    d = abs(a - b)
    if A is not None:
        d = min(d, A - d)
    return d < POS_TOL
