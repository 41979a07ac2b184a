"""Structural analysis of systoles on genus-2 (and one-zero) surfaces.

Everything is checked on the surface itself using representatives that are
invariant under the hyperelliptic involution: cylinder classes are
represented by the core curve, rigid classes by their unique geodesic.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .delaunay import delaunay_decomposition, edge_bounds
from .errors import NonSimpleCurve
from .flow import _cross_into, same_point, segment_intersection, segment_pieces
from .homology import HomologyBasis, homology_class
from .involution import FixedPoint, Involution, find_translation_involution
from .numeric import TWO_PI, Vec2
from .saddle import SaddleConnection
from .surface import Triangulation, invariants
from .systole import (
    ClosedGeodesic,
    Cylinder,
    SystoleAnalysis,
    SystoleClass,
    analyze_systoles,
)

PT_TOL = 1e-7
RATIO_SLACK = 1e-9

Curve = Union[ClosedGeodesic, Cylinder]


# ---------------------------------------------------------------------------
# curve geometry


def _segment_sig(T: Triangulation, s: SaddleConnection, reverse: bool = False):
    if reverse:
        v, pos, hol = s.end, s.end_pos, -s.holonomy
    else:
        v, pos, hol = s.start, s.start_pos, s.holonomy
    A = T.vertex_angle(v)
    pos = pos % A
    if A - pos < 1e-7:
        pos = 0.0
    return (v, round(pos, 6) + 0.0, round(hol.x, 6) + 0.0, round(hol.y, 6) + 0.0)


def geodesic_signature(T: Triangulation, geo: ClosedGeodesic) -> Tuple:
    """Key of a closed geodesic that ignores starting segment and orientation."""
    fwd = [_segment_sig(T, s) for s in geo.segments]
    bwd = [_segment_sig(T, s, reverse=True) for s in reversed(geo.segments)]
    n = len(fwd)
    cands = [tuple(seq[k:] + seq[:k]) for seq in (fwd, bwd) for k in range(n)]
    return min(cands)


def _pieces(T: Triangulation, curve: Curve):
    if isinstance(curve, Cylinder):
        return list(curve.core_pieces)
    out = []
    for s in curve.segments:
        out.extend(segment_pieces(T, s.start_corner, s.path, s.holonomy))
    return out


def _at_corner(T: Triangulation, t: int, p: Vec2) -> bool:
    return any((p - q).length() <= PT_TOL for q in T.triangle_points(t))


def _visits(T: Triangulation, geo: ClosedGeodesic):
    """(vertex, incoming position, outgoing position) for every junction."""
    segs = geo.segments
    out = []
    for k, s in enumerate(segs):
        nxt = segs[(k + 1) % len(segs)]
        out.append((s.end, s.end_pos, nxt.start_pos))
    return out


def _interleaved(A: float, p: Tuple[float, float], q: Tuple[float, float]) -> bool:
    """Whether the chords p and q on a circle of length A cross."""
    a, b = sorted(x % A for x in p)
    c_in = a < q[0] % A < b
    d_in = a < q[1] % A < b
    return c_in != d_in


@dataclass(frozen=True)
class IntersectionPoint:
    kind: str  # "transverse" or "cone"
    triangle: int
    point: Vec2
    vertex: Optional[int] = None


def _transverse(T: Triangulation, P: Sequence, Q: Sequence, same: bool) -> List[IntersectionPoint]:
    out: List[IntersectionPoint] = []
    for i, (t1, a1, b1) in enumerate(P):
        for j, (t2, a2, b2) in enumerate(Q):
            if t1 != t2 or (same and j <= i):
                continue
            r = segment_intersection(a1, b1, a2, b2)
            if r is None:
                continue
            s, u = r
            if not (-1e-9 <= s <= 1 + 1e-9 and -1e-9 <= u <= 1 + 1e-9):
                continue
            p = a1 + (b1 - a1) * s
            if _at_corner(T, t1, p):
                continue
            # a crossing on an edge shows up in both triangles
            if any(same_point(T, q.triangle, q.point, t1, p, PT_TOL) or
                   same_point(T, t1, p, q.triangle, q.point, PT_TOL) for q in out):
                continue
            out.append(IntersectionPoint("transverse", t1, p))
    return out


def _overlapping(P: Sequence, Q: Sequence, same: bool) -> bool:
    for i, (t1, a1, b1) in enumerate(P):
        d1 = b1 - a1
        for j, (t2, a2, b2) in enumerate(Q):
            if t1 != t2 or (same and j <= i):
                continue
            d2 = b2 - a2
            if abs(d1.cross(d2)) > 1e-12 * max(1.0, d1.length() * d2.length()):
                continue
            if abs(d1.cross(a2 - a1)) > 1e-9 * max(1.0, d1.length()):
                continue
            # collinear: check for an overlap of positive length
            L = d1.length()
            if L == 0:
                continue
            e = d1 / L
            x0, x1 = sorted(((a2 - a1).dot(e), (b2 - a1).dot(e)))
            if min(L, x1) - max(0.0, x0) > 1e-9:
                return True
    return False


def assert_simple(T: Triangulation, geo: Curve) -> None:
    """Raise NonSimpleCurve unless the curve has no transverse
    self-crossing, no repeated stretch and no crossing at a vertex."""
    P = _pieces(T, geo)
    if _transverse(T, P, P, same=True):
        raise NonSimpleCurve("curve crosses itself")
    if _overlapping(P, P, same=True):
        raise NonSimpleCurve("curve runs along itself")
    if isinstance(geo, Cylinder):
        return
    visits = _visits(T, geo)
    for i in range(len(visits)):
        for j in range(i + 1, len(visits)):
            v1, a1, b1 = visits[i]
            v2, a2, b2 = visits[j]
            if v1 == v2 and _interleaved(T.vertex_angle(v1), (a1, b1), (a2, b2)):
                raise NonSimpleCurve(f"curve crosses itself at vertex {v1}")


def intersections(T: Triangulation, g1: Curve, g2: Curve) -> List[IntersectionPoint]:
    """Transverse crossings of two curves plus the cone points both pass
    through (each shared cone point counted once).  A curve does not meet
    itself."""
    if g1 is g2:
        return []
    if isinstance(g1, ClosedGeodesic) and isinstance(g2, ClosedGeodesic):
        if geodesic_signature(T, g1) == geodesic_signature(T, g2):
            return []
    out = _transverse(T, _pieces(T, g1), _pieces(T, g2), same=False)
    v1 = set(g1.vertices) if isinstance(g1, ClosedGeodesic) else set()
    v2 = set(g2.vertices) if isinstance(g2, ClosedGeodesic) else set()
    for v in sorted(v1 & v2):
        h = T.cone_points()[v].corners[0]
        out.append(IntersectionPoint("cone", h // 3, T.local_start(h), vertex=v))
    return out


def is_separating(T: Triangulation, geo: ClosedGeodesic, basis: Optional[HomologyBasis] = None) -> bool:
    """A simple closed curve separates iff it is null-homologous."""
    assert_simple(T, geo)
    cls = homology_class(T, geo, basis)
    sep = not any(cls)
    if sep and geo.holonomy.length() > 1e-9:
        raise AssertionError("null-homologous curve with nonzero holonomy")
    return sep


# ---------------------------------------------------------------------------
# involution on curves


def map_connection(inv: Involution, s: SaddleConnection) -> Tuple:
    """Signature of the image of a saddle connection under the involution."""
    T = inv.triangulation
    w, pos = inv.map_position(s.start, s.start_pos)
    hol = -s.holonomy
    A = T.vertex_angle(w)
    if A - pos < 1e-7:
        pos = 0.0
    return (w, round(pos, 6) + 0.0, round(hol.x, 6) + 0.0, round(hol.y, 6) + 0.0)


def map_geodesic_signature(inv: Involution, geo: ClosedGeodesic) -> Tuple:
    """Signature of the image of a closed geodesic (compare with
    :func:`geodesic_signature`)."""
    T = inv.triangulation
    imgs = [map_connection(inv, s) for s in geo.segments]
    # image of segment k ends where the image of segment k+1 starts; its
    # reversal starts at the image of the end of segment k
    rev = []
    for s in reversed(geo.segments):
        w, pos = inv.map_position(s.end, s.end_pos)
        A = T.vertex_angle(w)
        if A - pos < 1e-7:
            pos = 0.0
        hol = s.holonomy
        rev.append((w, round(pos, 6) + 0.0, round(hol.x, 6) + 0.0, round(hol.y, 6) + 0.0))
    n = len(imgs)
    return min(tuple(seq[k:] + seq[:k]) for seq in (imgs, rev) for k in range(n))


def class_permutation(inv: Involution, classes: Sequence[SystoleClass]) -> Optional[List[int]]:
    """Index of the class containing the image of each class representative,
    or None if some image is not a systolic geodesic of any class."""
    T = inv.triangulation
    where: Dict[Tuple, int] = {}
    for i, c in enumerate(classes):
        for m in c.members:
            where[geodesic_signature(T, m)] = i
    out = []
    for c in classes:
        k = where.get(map_geodesic_signature(inv, c.representative))
        if k is None:
            return None
        out.append(k)
    return out


# ---------------------------------------------------------------------------
# class reports


def _locations(T: Triangulation, t: int, p: Vec2):
    """The point in triangle ``t`` and its copies in neighbours when it sits
    on an edge."""
    out = [(t, p)]
    pts = T.triangle_points(t)
    for k in range(3):
        w = 3 * t + k
        e = T.vec[w]
        if abs(e.cross(p - pts[k])) <= PT_TOL * e.length():
            out.append((T.opp[w] // 3, _cross_into(T, w, p)))
    return out


def _on_curve(T: Triangulation, fp: FixedPoint, pieces, vertices) -> bool:
    if fp.kind == "vertex":
        return fp.vertex in vertices
    locs = _locations(T, fp.triangle, fp.point)
    for (t, a, b) in pieces:
        d = b - a
        L = d.length()
        if L == 0:
            continue
        for (u, q) in locs:
            if u == t and abs(d.cross(q - a)) / L <= PT_TOL and -PT_TOL <= (q - a).dot(d) / L <= L + PT_TOL:
                return True
    return False


def _zeros(T: Triangulation) -> set:
    return {c.id for c in T.cone_points() if c.angle > TWO_PI + 1e-6}


@dataclass
class ClassReport:
    kind: str
    length: float
    holonomy: Vec2
    separating: bool
    zeros_visited: List[int]
    weierstrass_points_on_representative: List[int]  # indices into the fixed points
    prong_lengths: List[float]
    prongs: List[Tuple] = field(default_factory=list)  # unoriented segment keys

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "length": self.length,
            "holonomy": [self.holonomy.x, self.holonomy.y],
            "separating": self.separating,
            "zeros_visited": self.zeros_visited,
            "weierstrass_points": self.weierstrass_points_on_representative,
            "prong_lengths": self.prong_lengths,
        }


def classify_class(T: Triangulation, c: SystoleClass, inv: Optional[Involution],
                   basis: Optional[HomologyBasis] = None) -> ClassReport:
    """Report for one systole class.  ``T`` must be the triangulation the
    class and the involution refer to."""
    geo = c.representative
    sep = is_separating(T, geo, basis)
    zeros = _zeros(T)
    if c.kind == "cylinder":
        visited: List[int] = []  # the core curve avoids the vertex set
    else:
        visited = sorted({v for v in geo.vertices if v in zeros})
    on: List[int] = []
    prongs: List[float] = []
    keys: List[Tuple] = []
    stratum = tuple(sorted((cp.order for cp in T.cone_points() if cp.order > 0), reverse=True))
    if inv is not None:
        fps = inv.fixed_points
        if c.kind == "cylinder" and c.cylinder is not None:
            pieces = list(c.cylinder.core_pieces)
            verts: set = set()
        else:
            pieces = _pieces(T, geo)
            verts = set(geo.vertices)
        on = [i for i, fp in enumerate(fps) if _on_curve(T, fp, pieces, verts)]
        if stratum == (1, 1) and c.kind == "rigid" and not sep:
            for s in geo.segments:
                if s.start not in zeros or s.end not in zeros:
                    continue
                sp = segment_pieces(T, s.start_corner, s.path, s.holonomy)
                if any(fps[i].kind != "vertex" and _on_curve(T, fps[i], sp, set()) for i in on):
                    key = min(_segment_sig(T, s), _segment_sig(T, s, reverse=True))
                    keys.append(key)
                    prongs.append(s.length / 2)
    return ClassReport(c.kind, c.length, c.holonomy, sep, visited, on, prongs, keys)


# ---------------------------------------------------------------------------
# bound checks


@dataclass
class BoundCheck:
    name: str
    passed: bool
    value: object
    bound: object

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "value": self.value, "expected": self.bound}


@dataclass
class BoundReport:
    name: str
    genus: int
    stratum: Tuple[int, ...]
    systole: float
    ratio: float
    class_count: int
    checks: List[BoundCheck]
    classes: List[ClassReport] = field(default_factory=list)
    fixed_points: int = 0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[BoundCheck]:
        return [c for c in self.checks if not c.passed]


def _shape_key(T: Triangulation, unit: float, digits: int = 6):
    """Multiset of Delaunay cells up to translation, scaled by ``unit``."""
    C = delaunay_decomposition(T)
    keys = []
    for cell in C.cells:
        vs = cell.vertices
        m = len(vs)
        sides = [(vs[(i + 1) % m] - vs[i]) / unit for i in range(m)]
        seq = [(round(s.x, digits) + 0.0, round(s.y, digits) + 0.0) for s in sides]
        keys.append(min(tuple(seq[k:] + seq[:k]) for k in range(m)))
    return tuple(sorted(keys))


def _unoriented_shape(T: Triangulation, unit: float, digits: int = 6):
    """Like :func:`_shape_key` but also invariant under rotating the surface:
    cells are described by side lengths and turning angles."""
    C = delaunay_decomposition(T)
    keys = []
    for cell in C.cells:
        vs = cell.vertices
        m = len(vs)
        sides = [vs[(i + 1) % m] - vs[i] for i in range(m)]
        seq = []
        for i in range(m):
            turn = (sides[(i + 1) % m].angle() - sides[i].angle()) % TWO_PI
            seq.append((round(sides[i].length() / unit, digits) + 0.0, round(turn, digits) + 0.0))
        keys.append(min(tuple(seq[k:] + seq[:k]) for k in range(m)))
    return tuple(sorted(keys))


_X10_SHAPE = None


def _x10_shape():
    global _X10_SHAPE
    if _X10_SHAPE is None:
        from .catalog import catalog

        X = catalog("x10")
        _X10_SHAPE = _unoriented_shape(X, analyze_systoles(X).systole)
    return _X10_SHAPE


def verify_bounds(T: Triangulation, analysis: Optional[SystoleAnalysis] = None,
                  inv: Optional[Involution] = None, name: Optional[str] = None) -> BoundReport:
    """Compare computed quantities with the proved bounds that apply to the
    surface's genus and stratum."""
    info = invariants(T)
    g, v = info.genus, info.num_zeros + info.num_marked
    an = analysis or analyze_systoles(T)
    D = an.triangulation
    n = an.count()
    ratio = an.ratio
    stratum = info.stratum
    checks: List[BoundCheck] = []

    def add(nm, ok, value, bound):
        checks.append(BoundCheck(nm, bool(ok), value, bound))

    C = delaunay_decomposition(D)
    nc, ne, _ = C.counts
    emax, cmax = edge_bounds(g, v)
    add("delaunay_edges_le_6g-6+3v", ne <= emax, ne, emax)
    add("delaunay_cells_le_4g-4+2v", nc <= cmax, nc, cmax)
    add("equality-iff-all-triangles", (ne == emax and nc == cmax) == C.all_triangles(),
        C.all_triangles(), ne == emax and nc == cmax)

    one_zero = info.num_zeros == 1 and info.num_marked == 0
    if inv is None and g >= 2:
        inv = find_translation_involution(D)
    hyper = inv is not None and len(inv.fixed_points) == 2 * g + 2
    if inv is not None and g >= 1:
        k = len(inv.fixed_points)
        add("fixed_points_le_2g+2_and_congruent", k <= 2 * g + 2 and (2 * g + 2 - k) % 4 == 0,
            k, 2 * g + 2)
    if one_zero and g >= 2:
        add("one_zero_classes_le_6g-3", n <= 6 * g - 3, n, 6 * g - 3)
        cap = 4 / ((4 * g - 2) * math.sqrt(3))
        add("one_zero_ratio_le_4/((4g-2)sqrt3)", ratio <= cap + RATIO_SLACK, ratio, cap)
        if hyper:
            add("hyperelliptic_one_zero_classes_le_6g-5", n <= 6 * g - 5, n, 6 * g - 5)

    reports: List[ClassReport] = []
    if g == 2:
        add("genus2_classes_le_10", n <= 10, n, 10)
        if stratum == (2,):
            add("h2_classes_le_7", n <= 7, n, 7)
            cap = 2 / (3 * math.sqrt(3))
            add("h2_ratio_le_2/(3sqrt3)", ratio <= cap + RATIO_SLACK, ratio, cap)
        basis = HomologyBasis(D)
        reports = [classify_class(D, c, inv, basis) for c in an.classes]
        n_sep = sum(1 for r in reports if r.separating)
        add("at_most_one_separating_systole", n_sep <= 1, n_sep, 1)
        if n_sep:
            add("separating_implies_classes_le_9", n <= 9, n, 9)
        if inv is not None and len(inv.fixed_points) == 6:
            perm = class_permutation(inv, an.classes)
            add("involution_preserves_each_class", perm == list(range(n)), perm, list(range(n)))
        if stratum == (1, 1) and inv is not None:
            direct = [r for r in reports if r.kind == "cylinder" and not r.separating]
            indirect = [r for r in reports if r.kind == "rigid" and not r.separating]
            per_w = Counter(i for r in direct for i in r.weierstrass_points_on_representative)
            worst = max(per_w.values(), default=0)
            add("direct_arcs_per_weierstrass_le_2", worst <= 2, worst, 2)
            add("direct_arcs_le_6", len(direct) <= 6, len(direct), 6)
            add("indirect_arcs_le_6", len(indirect) <= 6, len(indirect), 6)
            prong = {}
            for r in reports:
                for key, L in zip(r.prongs, r.prong_lengths):
                    prong[key] = L
            lengths = sorted(prong.values())
            add("prongs_le_5", len(lengths) <= 5, len(lengths), 5)
            equal = bool(lengths) and lengths[-1] - lengths[0] <= 1e-7 * an.systole
            if equal:
                add("equal_prongs_le_4", len(lengths) <= 4, len(lengths), 4)
            if lengths and not equal:
                short, rest = lengths[0], lengths[1:]
                ok = all(abs(x + short - an.systole / 2) <= 1e-7 * an.systole for x in rest)
                add("unequal_prongs_complement_short", ok, lengths, an.systole / 2)
            if n_sep:
                ok = len(lengths) == 0 or (len(lengths) == 2 and equal)
                add("separating_implies_0_or_2_equal_prongs", ok, len(lengths), [0, 2])
            if n == 10:
                same = _unoriented_shape(D, an.systole) == _x10_shape()
                add("ten_classes_implies_x10_shape", same, same, True)
    return BoundReport(name or T.name, g, stratum, an.systole, ratio, n, checks, reports,
                       0 if inv is None else len(inv.fixed_points))
