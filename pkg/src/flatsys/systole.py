"""Closed geodesics, cylinders, the systole and homotopy classes of systoles.

Every homotopy class of closed curves has a shortest representative that is
either a chain of saddle connections meeting at the vertex set with angle at
least pi on both sides, or the core of a flat cylinder whose boundary is such
a chain.  So the systole is found among chains of saddle connections, and
systolic chains are grouped by the cylinder they bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .delaunay import delaunay_flip
from .errors import BudgetExceeded, UnknownDirection
from .flow import HitVertex, same_point, segment_intersection, segment_pieces, walk, walk_from_vertex
from .numeric import TWO_PI, Vec2
from .saddle import (
    DEFAULT_BUDGET,
    POS_TOL,
    SaddleConnection,
    _pos_close,
    enumerate_saddle_connections,
    reverse_index,
    trace_ray,
)
from .surface import Triangulation

ANGLE_TOL = 1e-8
LENGTH_RTOL = 1e-9
DEFAULT_MAX_SEGMENTS = 4


@dataclass(frozen=True)
class ClosedGeodesic:
    segments: Tuple[SaddleConnection, ...]
    junction_angles: Tuple[Tuple[float, float], ...]  # (left, right) at the end of each segment
    key: Tuple[int, ...] = ()

    @property
    def total_length(self) -> float:
        return sum(s.length for s in self.segments)

    length = total_length

    @property
    def holonomy(self) -> Vec2:
        h = Vec2(0.0, 0.0)
        for s in self.segments:
            h = h + s.holonomy
        return h

    @property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(s.start for s in self.segments)

    def straight_sides(self) -> List[str]:
        """Sides ('left'/'right') along which every junction angle is pi."""
        out = []
        if all(abs(a[0] - math.pi) <= ANGLE_TOL for a in self.junction_angles):
            out.append("left")
        if all(abs(a[1] - math.pi) <= ANGLE_TOL for a in self.junction_angles):
            out.append("right")
        return out

    def is_direct(self) -> bool:
        """True if the curve can be pushed off the vertex set (bounds a
        cylinder on some side)."""
        return bool(self.straight_sides())


def junction_angles(T: Triangulation, arriving: SaddleConnection,
                    leaving: SaddleConnection) -> Tuple[float, float]:
    """Angles (left, right) between consecutive segments at their common
    vertex, measured on the left and the right of the direction of travel."""
    A = T.vertex_angle(arriving.end)
    left = (arriving.end_pos - leaving.start_pos) % A
    if A - left < 1e-12:
        left = 0.0
    return left, A - left


def _is_periodic(seq: Tuple[int, ...]) -> bool:
    n = len(seq)
    for d in range(1, n):
        if n % d == 0 and seq == seq[d:] + seq[:d]:
            return True
    return False


def _canonical(seq: Tuple[int, ...], rev: Sequence[int]) -> Tuple[int, ...]:
    n = len(seq)
    r = tuple(rev[i] for i in reversed(seq))
    cands = [seq[k:] + seq[:k] for k in range(n)]
    if -1 not in r:
        cands += [r[k:] + r[:k] for k in range(n)]
    return min(cands)


def closed_concatenations(T: Triangulation, L: float, max_segments: int = DEFAULT_MAX_SEGMENTS,
                          scs: Optional[List[SaddleConnection]] = None,
                          budget: int = DEFAULT_BUDGET) -> List[ClosedGeodesic]:
    """All closed local geodesics of length at most ``L`` made of at most
    ``max_segments`` saddle connections, once each up to rotation and
    reversal.  Junctions need angle >= pi on both sides."""
    if max_segments < 1:
        raise ValueError("max_segments must be at least 1")
    if scs is None:
        scs = enumerate_saddle_connections(T, L, budget=budget)
    Lt = L * (1 + LENGTH_RTOL)
    scs = [s for s in scs if s.length <= Lt]
    rev = reverse_index(scs)
    lengths = [s.length for s in scs]
    by_start: Dict[int, List[int]] = {}
    for i, s in enumerate(scs):
        by_start.setdefault(s.start, []).append(i)

    def ok(i, j):
        l, r = junction_angles(T, scs[i], scs[j])
        return l >= math.pi - ANGLE_TOL and r >= math.pi - ANGLE_TOL

    seen = set()
    out: List[ClosedGeodesic] = []
    nodes = 0
    for first in range(len(scs)):
        stack = [((first,), lengths[first])]
        while stack:
            seq, total = stack.pop()
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded("closed geodesic search exceeded its node budget")
            last = seq[-1]
            if scs[last].end == scs[first].start and ok(last, first):
                if not _is_periodic(seq):
                    key = _canonical(seq, rev)
                    if key not in seen:
                        seen.add(key)
                        segs = tuple(scs[i] for i in seq)
                        angs = tuple(
                            junction_angles(T, segs[k], segs[(k + 1) % len(segs)])
                            for k in range(len(segs))
                        )
                        out.append(ClosedGeodesic(segs, angs, key))
            if len(seq) >= max_segments:
                continue
            for j in by_start.get(scs[last].end, ()):
                if j < first:
                    continue
                t = total + lengths[j]
                if t <= Lt and ok(last, j):
                    stack.append((seq + (j,), t))
    out.sort(key=lambda g: (round(g.total_length, 9), g.key))
    return out


# ---------------------------------------------------------------------------
# cylinders


@dataclass
class Cylinder:
    direction: float  # unoriented, in [0, pi)
    girth: float
    width: float
    bottom: Tuple[SaddleConnection, ...] = ()
    top: Tuple[SaddleConnection, ...] = ()
    core: Tuple[int, ...] = ()  # edges (canonical half-edges) crossed by the core curve
    core_pieces: Tuple = ()

    @property
    def area(self) -> float:
        return self.girth * self.width

    @property
    def key(self):
        return (round(self.direction, 7), frozenset(self.core))


@dataclass
class Unknown:
    reason: str = ""


def _unit(a: float) -> Vec2:
    return Vec2(math.cos(a), math.sin(a))


def _core_curve(T: Triangulation, v: int, pos: float, d: Vec2, width: float, girth: float):
    """Trace the curve at height width/2 above the boundary point at vertex
    ``v``, leaving it perpendicular at angular position ``pos``."""
    h, a = T.corner_containing(v, pos)
    n = T.vec[h].rotate(a)
    n = n / n.length()
    start = walk_from_vertex(T, h, n, width / 2)
    res = walk(T, start.triangle, start.point, d, girth)
    if not same_point(T, res.triangle, res.point, start.triangle, start.point, 1e-6 * max(1.0, girth)):
        raise UnknownDirection("cylinder core does not close up")
    core = frozenset(min(w, T.opp[w]) for w in res.crossed)
    return core, tuple(res.pieces)


def cylinder_of(T: Triangulation, geo: ClosedGeodesic, side: str,
                budget: int = DEFAULT_BUDGET) -> Cylinder:
    """The maximal cylinder bounded by ``geo`` on ``side`` (all junction
    angles on that side must be pi)."""
    hol = geo.holonomy
    girth = hol.length()
    d = hol / girth
    sign = 1.0 if side == "left" else -1.0
    area = T.area()
    R = math.hypot(area / girth, girth) * (1 + 1e-9)
    verts = set(geo.vertices)
    scs = enumerate_saddle_connections(T, R, budget=budget, starts=verts)
    width = math.inf
    segs = geo.segments
    for k, seg in enumerate(segs):
        v = seg.start
        A = T.vertex_angle(v)
        a_out = seg.start_pos
        for s in scs:
            if s.start != v:
                continue
            rel = (s.start_pos - a_out) % A if side == "left" else (a_out - s.start_pos) % A
            if POS_TOL < rel < math.pi - POS_TOL:
                perp = sign * d.cross(s.holonomy)
                if perp > 1e-12:
                    width = min(width, perp)
    if not math.isfinite(width):
        raise UnknownDirection("no vertex found across the cylinder")
    pos = segs[0].start_pos + sign * math.pi / 2
    core, pieces = _core_curve(T, segs[0].start, pos, d, width, girth)
    return Cylinder(hol.angle() % math.pi, girth, width, bottom=segs if side == "left" else (),
                    top=segs if side == "right" else (), core=tuple(sorted(core)), core_pieces=pieces)


def _direction_positions(T: Triangulation, v: int, theta: float) -> List[float]:
    """Angular positions at vertex ``v`` pointing in planar direction theta."""
    out = []
    for h in T.cone_points()[v].corners:
        base = T.vec[h].angle()
        a = (theta - base) % TWO_PI
        if TWO_PI - a < 1e-10:
            a = 0.0
        if a < T.corner_angle(h) - 1e-10:
            out.append(T.corner_offset(h) + a)
    return out


def decompose_direction(T: Triangulation, theta: float, B: float) -> Union[List[Cylinder], Unknown]:
    """Cylinder decomposition in direction ``theta`` if every separatrix in
    that direction is a saddle connection of length at most ``B``."""
    theta = theta % math.pi
    forward: List[SaddleConnection] = []
    backward_pos: Dict[int, List[float]] = {}
    for v in range(T.num_vertices):
        for th, store in ((theta, True), (theta + math.pi, False)):
            for pos in _direction_positions(T, v, th):
                sc = trace_ray(T, v, pos, B)
                if sc is None:
                    return Unknown(f"separatrix from vertex {v} longer than {B}")
                if store:
                    forward.append(sc)
                else:
                    backward_pos.setdefault(v, []).append(pos)
    # every backward separatrix must be a forward one traversed backwards
    for s in forward:
        lst = backward_pos.get(s.end, [])
        A = T.vertex_angle(s.end)
        if not any(_pos_close(p % A, s.end_pos, A) for p in lst):
            return Unknown("separatrices do not pair up")
    n = len(forward)

    def find_out(v, pos):
        A = T.vertex_angle(v)
        pos = pos % A
        for i, s in enumerate(forward):
            if s.start == v and _pos_close(s.start_pos, pos, A):
                return i
        raise UnknownDirection("boundary continuation not found")

    nxt_l = [find_out(s.end, s.end_pos - math.pi) for s in forward]
    nxt_r = [find_out(s.end, s.end_pos + math.pi) for s in forward]

    def cycles(nxt):
        seen = [False] * n
        out = []
        for i in range(n):
            if not seen[i]:
                cyc = []
                j = i
                while not seen[j]:
                    seen[j] = True
                    cyc.append(j)
                    j = nxt[j]
                out.append(cyc)
        return out

    bottoms = cycles(nxt_l)
    tops = cycles(nxt_r)
    top_of = {}
    for ci, cyc in enumerate(tops):
        for i in cyc:
            top_of[i] = ci
    # pieces of every separatrix, also registered in the triangle across an edge
    pieces: Dict[int, List[Tuple[Vec2, Vec2, int]]] = {}
    for i, s in enumerate(forward):
        for t, a, b in segment_pieces(T, s.start_corner, s.path, s.holonomy):
            pieces.setdefault(t, []).append((a, b, i))
        if not s.path:
            g = T.opp[s.start_corner]
            a = T.local_start(g)
            pieces.setdefault(g // 3, []).append((a + T.vec[g], a, i))
    d = _unit(theta)
    nrm = Vec2(-d.y, d.x)
    area = T.area()
    result = []
    used_tops = set()
    for cyc in bottoms:
        girth = sum(forward[i].length for i in cyc)
        width, hit = _sweep_width(T, forward, cyc, nrm, pieces, area / girth)
        if hit is None:
            return Unknown("could not measure cylinder width")
        ti = top_of[hit]
        used_tops.add(ti)
        bottom = tuple(forward[i] for i in cyc)
        top = tuple(forward[i] for i in tops[ti])
        pos = bottom[0].start_pos + math.pi / 2
        try:
            core, cpieces = _core_curve(T, bottom[0].start, pos, d, width, girth)
        except (HitVertex, UnknownDirection):
            return Unknown("cylinder core does not close up")
        result.append(Cylinder(theta, girth, width, bottom, top, tuple(sorted(core)), cpieces))
    total = sum(c.area for c in result)
    if len(used_tops) != len(tops) or abs(total - area) > 1e-6 * area:
        return Unknown("cylinders do not fill the surface")
    result.sort(key=lambda c: (round(c.girth, 9), round(c.width, 9), c.core))
    return result


def _sweep_width(T, forward, cyc, nrm, pieces, max_width):
    """Distance from a bottom boundary segment, along the left normal, to the
    first separatrix hit; returns (width, index of the separatrix hit)."""
    s = max((forward[i] for i in cyc), key=lambda x: x.length)
    segs = segment_pieces(T, s.start_corner, s.path, s.holonomy)
    t, a, b = max(segs, key=lambda x: (x[2] - x[1]).length())
    for lam in (0.5, 0.31, 0.73, 0.137, 0.859):
        p = a + (b - a) * lam
        skip = s.start_corner if not s.path else None
        try:
            res = walk(T, t, p, nrm, max_width * (1 + 1e-6), skip=skip)
            walked = res.pieces
            hitv = None
        except HitVertex as exc:
            walked = exc.pieces
            hitv = exc.traveled
        traveled = 0.0
        found = None
        for tri, p0, p1 in walked:
            seglen = (p1 - p0).length()
            best = None
            for (qa, qb, idx) in pieces.get(tri, ()):
                st = segment_intersection(p0, p1, qa, qb)
                if st is None:
                    continue
                u, v = st
                if -1e-9 <= v <= 1 + 1e-9 and 1e-9 < u * seglen + traveled and -1e-9 <= u <= 1 + 1e-9:
                    dist = traveled + u * seglen
                    if dist > 1e-9 and (best is None or dist < best[0]):
                        best = (dist, idx)
            if best is not None:
                found = best
                break
            traveled += seglen
        if found is not None:
            return found
        if hitv is not None:
            continue  # hit a vertex without crossing: try another base point
    return None, None


# ---------------------------------------------------------------------------
# systole and classes


@dataclass
class SystoleResult:
    triangulation: Triangulation  # the Delaunay triangulation all data refers to
    systole: float
    geodesics: List[ClosedGeodesic]  # systolic closed geodesics
    bound: float  # enumeration length bound used
    max_segments: int


def _min_edge(T: Triangulation) -> float:
    return min(T.vec[h].length() for h in T.edges())


def compute_systole(T: Triangulation, max_segments: int = DEFAULT_MAX_SEGMENTS,
                    budget: int = DEFAULT_BUDGET) -> SystoleResult:
    """Systole with all systolic closed geodesics.

    The search bound starts at twice the shortest saddle connection and
    doubles until a closed geodesic is found.  The segment cap is raised to
    bound / shortest saddle connection so that no chain is missed.
    """
    D = delaunay_flip(T)
    s0 = _min_edge(D)
    L = 2 * s0
    while True:
        ms = max(max_segments, int(L / s0 * (1 + 1e-9)))
        scs = enumerate_saddle_connections(D, L, budget=budget)
        geos = closed_concatenations(D, L, ms, scs=scs, budget=budget)
        if geos:
            sys = min(g.total_length for g in geos)
            tol = sys * LENGTH_RTOL * 10
            best = [g for g in geos if g.total_length <= sys + tol]
            return SystoleResult(D, sys, best, L, ms)
        L *= 2


def systole(T: Triangulation, max_segments: int = DEFAULT_MAX_SEGMENTS) -> float:
    return compute_systole(T, max_segments).systole


def systolic_ratio(T: Triangulation, max_segments: int = DEFAULT_MAX_SEGMENTS) -> float:
    s = systole(T, max_segments)
    return s * s / T.area()


@dataclass
class SystoleClass:
    kind: str  # "cylinder" or "rigid"
    representative: ClosedGeodesic
    holonomy: Vec2  # sign normalised to angle in [0, pi)
    length: float
    members: List[ClosedGeodesic] = field(default_factory=list)
    cylinder: Optional[Cylinder] = None


def _unoriented(v: Vec2) -> Vec2:
    a = v.angle()
    if a >= math.pi - 1e-12 and a < TWO_PI - 1e-12:
        v = -v
    return Vec2(v.x + 0.0, v.y + 0.0)


@dataclass
class SystoleAnalysis:
    result: SystoleResult
    classes: List[SystoleClass]

    @property
    def systole(self) -> float:
        return self.result.systole

    @property
    def triangulation(self) -> Triangulation:
        return self.result.triangulation

    @property
    def ratio(self) -> float:
        return self.systole ** 2 / self.triangulation.area()

    def count(self, kind: Optional[str] = None) -> int:
        return sum(1 for c in self.classes if kind is None or c.kind == kind)


def analyze_systoles(T: Triangulation, max_segments: int = DEFAULT_MAX_SEGMENTS,
                     budget: int = DEFAULT_BUDGET) -> SystoleAnalysis:
    res = compute_systole(T, max_segments, budget)
    D = res.triangulation
    cyl: Dict[object, SystoleClass] = {}
    classes: List[SystoleClass] = []
    for g in res.geodesics:
        sides = g.straight_sides()
        if sides:
            c = cylinder_of(D, g, sides[0], budget)
            if c.key in cyl:
                cyl[c.key].members.append(g)
                continue
            sc = SystoleClass("cylinder", g, _unoriented(g.holonomy), g.total_length, [g], c)
            cyl[c.key] = sc
            classes.append(sc)
        else:
            classes.append(SystoleClass("rigid", g, _unoriented(g.holonomy), g.total_length, [g]))
    classes.sort(key=lambda c: (c.kind, round(c.holonomy.angle() % math.pi, 9), c.representative.key))
    return SystoleAnalysis(res, classes)


def systole_classes(T: Triangulation, max_segments: int = DEFAULT_MAX_SEGMENTS) -> List[SystoleClass]:
    return analyze_systoles(T, max_segments).classes


def count_classes(T: Triangulation, max_segments: int = DEFAULT_MAX_SEGMENTS) -> int:
    return len(systole_classes(T, max_segments))


def closed_geodesic_lengths(T: Triangulation, L: float, budget: int = DEFAULT_BUDGET) -> List[float]:
    """Sorted lengths of all closed geodesics of length at most ``L``
    (each counted once up to rotation and reversal).  ``T`` should be
    Delaunay so that its shortest edge is the shortest saddle connection."""
    s0 = _min_edge(T)
    ms = max(DEFAULT_MAX_SEGMENTS, int(L / s0 * (1 + 1e-9)))
    scs = enumerate_saddle_connections(T, L, budget=budget)
    return sorted(g.total_length for g in closed_concatenations(T, L, ms, scs=scs, budget=budget))
