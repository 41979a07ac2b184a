"""Translation surfaces as glued Euclidean triangles.

A :class:`Triangulation` stores half-edges in fixed slots: half-edge ``h``
belongs to triangle ``h // 3`` and the three half-edges of a triangle are
listed counterclockwise.  Each half-edge carries its planar vector and the
index of the oppositely oriented half-edge it is glued to.  Gluings are
translations, so ``vec[opp[h]] == -vec[h]``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import numeric
from .errors import (
    DegenerateCell,
    GaussBonnetMismatch,
    NonSimplePolygon,
    NonTranslationGluing,
    ParseError,
    UnbalancedGluing,
)
from .numeric import TWO_PI, Vec2, angle_ccw, orientation

EdgeRef = Tuple[str, int]


@dataclass
class PolygonPresentation:
    """Polygons (counterclockwise vertex lists) with a complete side gluing."""

    name: str
    polygons: Dict[str, List[Vec2]]
    gluings: List[Tuple[EdgeRef, EdgeRef]]

    def side(self, ref: EdgeRef) -> Vec2:
        pid, i = ref
        pts = self.polygons[pid]
        return pts[(i + 1) % len(pts)] - pts[i]

    def area(self) -> float:
        return sum(_polygon_area(p) for p in self.polygons.values())

    def validate(self) -> None:
        eps = numeric.get_eps()
        seen = {}
        for a, b in self.gluings:
            for ref in (a, b):
                pid, i = ref
                if pid not in self.polygons:
                    raise UnbalancedGluing(f"unknown polygon {pid!r}")
                if not 0 <= i < len(self.polygons[pid]):
                    raise UnbalancedGluing(f"polygon {pid!r} has no side e{i}")
                if ref in seen:
                    raise UnbalancedGluing(f"side {pid}.e{i} glued twice")
                seen[ref] = True
            if a == b:
                raise UnbalancedGluing(f"side {a[0]}.e{a[1]} glued to itself")
            va, vb = self.side(a), self.side(b)
            scale = max(1.0, va.length())
            if (va + vb).length() > eps * scale:
                raise NonTranslationGluing(
                    f"{a[0]}.e{a[1]} and {b[0]}.e{b[1]} are not glued by a translation"
                )
        for pid, pts in self.polygons.items():
            for i in range(len(pts)):
                if (pid, i) not in seen:
                    raise UnbalancedGluing(f"side {pid}.e{i} is not glued")


def _polygon_area(pts: Sequence[Vec2]) -> float:
    s = 0.0
    n = len(pts)
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        s += a[0] * b[1] - a[1] * b[0]
    return 0.5 * s


@dataclass(frozen=True)
class ConePoint:
    id: int
    corners: Tuple[int, ...]  # half-edges whose start is this point, ccw order
    angle: float

    @property
    def order(self) -> int:
        return int(round(self.angle / TWO_PI)) - 1

    @property
    def marked(self) -> bool:
        return self.order == 0


@dataclass(frozen=True)
class SurfaceInfo:
    genus: int
    stratum: Tuple[int, ...]
    area: float
    num_zeros: int
    num_marked: int
    num_vertices: int
    num_edges: int
    num_triangles: int


def next_he(h: int) -> int:
    return h - h % 3 + (h + 1) % 3


def prev_he(h: int) -> int:
    return h - h % 3 + (h + 2) % 3


class Triangulation:
    """Closed translation surface as glued triangles (see module docstring)."""

    def __init__(self, vec, opp, name: str = "surface", check: bool = True):
        if len(vec) % 3 or len(vec) != len(opp):
            raise ValueError("half-edge arrays must have equal length divisible by 3")
        self.vec: List[Vec2] = [Vec2(float(v[0]), float(v[1])) for v in vec]
        self.opp: List[int] = list(opp)
        self.name = name
        self._vertices = None
        if check:
            self.check()

    # -- basic structure -------------------------------------------------
    @property
    def num_half_edges(self) -> int:
        return len(self.vec)

    @property
    def num_triangles(self) -> int:
        return len(self.vec) // 3

    def edges(self) -> List[int]:
        """Canonical half-edge of each undirected edge, ascending."""
        return [h for h in range(len(self.vec)) if h < self.opp[h]]

    def triangle_points(self, t: int) -> Tuple[Vec2, Vec2, Vec2]:
        """Local coordinates of the triangle, slot-0 vertex at the origin."""
        a = self.vec[3 * t]
        b = a + self.vec[3 * t + 1]
        return Vec2(0.0, 0.0), a, b

    def local_start(self, h: int) -> Vec2:
        """Local coordinates (in its triangle) of the start point of ``h``."""
        return self.triangle_points(h // 3)[h % 3]

    def triangle_area(self, t: int) -> float:
        return 0.5 * self.vec[3 * t].cross(self.vec[3 * t + 1])

    def area(self) -> float:
        return sum(self.triangle_area(t) for t in range(self.num_triangles))

    def copy(self, name: Optional[str] = None) -> "Triangulation":
        return Triangulation(self.vec, self.opp, name or self.name, check=False)

    def scaled(self, k: float) -> "Triangulation":
        return Triangulation([v * k for v in self.vec], self.opp, self.name, check=False)

    def check(self) -> None:
        eps = numeric.get_eps()
        n = len(self.vec)
        for h in range(n):
            o = self.opp[h]
            if not 0 <= o < n or self.opp[o] != h or o == h:
                raise UnbalancedGluing(f"half-edge {h} has an invalid gluing")
            if (self.vec[h] + self.vec[o]).length() > eps * max(1.0, self.vec[h].length()):
                raise NonTranslationGluing(f"half-edges {h} and {o} are not opposite vectors")
        for t in range(self.num_triangles):
            p0, p1, p2 = self.triangle_points(t)
            closing = p2 + self.vec[3 * t + 2]
            if closing.length() > eps * max(1.0, p1.length(), p2.length()):
                raise DegenerateCell(f"triangle {t} does not close")
            if orientation(p0, p1, p2) != 1:
                raise DegenerateCell(f"triangle {t} is not positively oriented")
        # connectivity
        seen = {0}
        stack = [0]
        while stack:
            t = stack.pop()
            for h in range(3 * t, 3 * t + 3):
                u = self.opp[h] // 3
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        if len(seen) != self.num_triangles:
            raise UnbalancedGluing("surface is not connected")

    # -- vertices ----------------------------------------------------------
    def _build_vertices(self):
        n = len(self.vec)
        vertex_of = [-1] * n
        corner_angle = [0.0] * n
        offset = [0.0] * n
        cones: List[ConePoint] = []
        for h in range(n):
            corner_angle[h] = angle_ccw(self.vec[h], -self.vec[prev_he(h)])
        for h0 in range(n):
            if vertex_of[h0] >= 0:
                continue
            v = len(cones)
            corners = []
            total = 0.0
            h = h0
            while True:
                vertex_of[h] = v
                offset[h] = total
                corners.append(h)
                total += corner_angle[h]
                h = self.opp[prev_he(h)]
                if h == h0:
                    break
            cones.append(ConePoint(v, tuple(corners), total))
        self._vertices = (vertex_of, corner_angle, offset, cones)

    def _vdata(self):
        if self._vertices is None:
            self._build_vertices()
        return self._vertices

    def vertex(self, h: int) -> int:
        """Vertex at the start of half-edge ``h``."""
        return self._vdata()[0][h]

    def corner_angle(self, h: int) -> float:
        return self._vdata()[1][h]

    def corner_offset(self, h: int) -> float:
        """Angular position of direction ``vec[h]`` around its start vertex."""
        return self._vdata()[2][h]

    def cone_points(self) -> List[ConePoint]:
        return list(self._vdata()[3])

    def vertex_angle(self, v: int) -> float:
        return self._vdata()[3][v].angle

    @property
    def num_vertices(self) -> int:
        return len(self._vdata()[3])

    def position(self, h: int, direction) -> float:
        """Angular position around the start vertex of ``h`` of a direction
        lying in the corner of ``h``."""
        return self.corner_offset(h) + angle_ccw(self.vec[h], direction)

    def corner_containing(self, v: int, pos: float) -> Tuple[int, float]:
        """Corner half-edge at vertex ``v`` containing angular position ``pos``
        (half-open sectors) and the angle inside that corner."""
        cone = self._vdata()[3][v]
        pos = pos % cone.angle
        tol = 1e-12 * cone.angle
        for h in cone.corners:
            off = self.corner_offset(h)
            if off - tol <= pos < off + self.corner_angle(h) - tol:
                return h, max(0.0, pos - off)
        h = cone.corners[0]
        return h, 0.0

    def direction_at(self, v: int, pos: float) -> Vec2:
        h, a = self.corner_containing(v, pos)
        d = self.vec[h].rotate(a)
        return d / d.length()

    # -- mutation helpers (used on private copies only) -----------------------
    def _invalidate(self):
        self._vertices = None

    def flip(self, h: int) -> None:
        """Flip the edge of ``h`` in place.  The quadrilateral must be convex."""
        g = self.opp[h]
        t1, t2 = h // 3, g // 3
        a1, a2 = next_he(h), prev_he(h)
        b1, b2 = next_he(g), prev_he(g)
        vec, opp = self.vec, self.opp
        va1, va2, vb1, vb2 = vec[a1], vec[a2], vec[b1], vec[b2]
        oa1, oa2, ob1, ob2 = opp[a1], opp[a2], opp[b1], opp[b2]
        # new t1 = (D->C, C->P, P->D), new t2 = (C->D, D->Q, Q->C)
        n1 = 3 * t1
        n2 = 3 * t2
        new_vec = {
            n1: -(va2 + vb1),
            n1 + 1: va2,
            n1 + 2: vb1,
            n2: va2 + vb1,
            n2 + 1: vb2,
            n2 + 2: va1,
        }
        moved = {a2: n1 + 1, b1: n1 + 2, b2: n2 + 1, a1: n2 + 2}
        old_opp = {a2: oa2, b1: ob1, b2: ob2, a1: oa1}
        for k, v in new_vec.items():
            vec[k] = v
        opp[n1] = n2
        opp[n2] = n1
        for old, new in moved.items():
            o = moved.get(old_opp[old], old_opp[old])
            opp[new] = o
            opp[o] = new
        self._invalidate()

    def __repr__(self):
        return f"Triangulation({self.name!r}, triangles={self.num_triangles})"


# ---------------------------------------------------------------------------
# parsing

_GLUE_RE = re.compile(r"^([^\s.]+)\.e(\d+)$")


def _parse_cycles(text: str, lineno: int) -> List[List[int]]:
    text = text.strip()
    if not text:
        return []
    cycles = []
    for m in re.finditer(r"\(([^()]*)\)|(\S)", text):
        if m.group(2) is not None:
            raise ParseError(f"unexpected {m.group(2)!r} in cycle notation", lineno)
        body = m.group(1).strip()
        if not body:
            continue
        if re.search(r"[\s,]", body):
            items = [x for x in re.split(r"[\s,]+", body) if x]
        else:
            items = list(body)
        try:
            cycles.append([int(x) for x in items])
        except ValueError:
            raise ParseError(f"bad cycle {body!r}", lineno) from None
    return cycles


def cycles_to_perm(cycles: List[List[int]], n: int) -> List[int]:
    """0-based image list of a permutation of {1..n} given by cycles."""
    perm = list(range(n))
    seen = set()
    for cyc in cycles:
        for i, a in enumerate(cyc):
            if not 1 <= a <= n or a in seen:
                raise ValueError(f"invalid cycle entry {a}")
            seen.add(a)
            perm[a - 1] = cyc[(i + 1) % len(cyc)] - 1
    return perm


def _num(tok: str, lineno: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ParseError(f"bad number {tok!r}", lineno) from None


def parse_surface(text: str) -> PolygonPresentation:
    """Parse a surface file (polygon or permutation form)."""
    name = None
    kind = None
    polygons: Dict[str, List[Vec2]] = {}
    gluings: List[Tuple[EdgeRef, EdgeRef]] = []
    current = None
    sigma = tau = None
    cell = None
    ncells = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if kind is None:
            if head not in ("surface", "permsurface") or not rest:
                raise ParseError("expected 'surface <name>' or 'permsurface <name>'", lineno)
            kind, name = head, rest
            continue
        if kind == "surface":
            if head == "polygon":
                if not rest or rest in polygons:
                    raise ParseError(f"bad or duplicate polygon id {rest!r}", lineno)
                current = rest
                polygons[current] = []
            elif head == "v":
                if current is None:
                    raise ParseError("vertex outside a polygon", lineno)
                toks = rest.split()
                if len(toks) != 2:
                    raise ParseError("vertex needs two coordinates", lineno)
                polygons[current].append(Vec2(_num(toks[0], lineno), _num(toks[1], lineno)))
            elif head == "glue":
                toks = rest.split()
                if len(toks) != 2:
                    raise ParseError("glue needs two sides", lineno)
                refs = []
                for tok in toks:
                    m = _GLUE_RE.match(tok)
                    if not m:
                        raise ParseError(f"bad side reference {tok!r}", lineno)
                    refs.append((m.group(1), int(m.group(2))))
                gluings.append((refs[0], refs[1]))
            else:
                raise ParseError(f"unknown directive {head!r}", lineno)
        else:
            if head == "sigma":
                sigma = _parse_cycles(rest, lineno)
            elif head == "tau":
                tau = _parse_cycles(rest, lineno)
            elif head == "cell":
                toks = rest.split()
                if len(toks) != 4:
                    raise ParseError("cell needs four numbers", lineno)
                vals = [_num(t, lineno) for t in toks]
                cell = (Vec2(vals[0], vals[1]), Vec2(vals[2], vals[3]))
            elif head == "n":
                try:
                    ncells = int(rest)
                except ValueError:
                    raise ParseError(f"bad cell count {rest!r}", lineno) from None
            else:
                raise ParseError(f"unknown directive {head!r}", lineno)
    if kind is None:
        raise ParseError("empty surface file", 1)
    if kind == "surface":
        for pid, pts in polygons.items():
            if len(pts) < 3:
                raise ParseError(f"polygon {pid!r} has fewer than 3 vertices")
        pres = PolygonPresentation(name, polygons, gluings)
        pres.validate()
        return pres
    if sigma is None or tau is None or cell is None:
        raise ParseError("permsurface needs sigma, tau and cell lines")
    labels = [a for cyc in sigma + tau for a in cyc]
    n = ncells or (max(labels) if labels else 1)
    try:
        s = cycles_to_perm(sigma, n)
        t = cycles_to_perm(tau, n)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    return permutation_presentation(s, t, cell[0], cell[1], name)


def format_surface(p: PolygonPresentation) -> str:
    lines = [f"surface {p.name}"]
    for pid, pts in p.polygons.items():
        lines.append(f"polygon {pid}")
        lines.extend(f"v {q.x!r} {q.y!r}" for q in pts)
    lines.extend(f"glue {a[0]}.e{a[1]} {b[0]}.e{b[1]}" for a, b in p.gluings)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# triangulation of a presentation


def _ear_clip(pts: List[Vec2], pid: str) -> List[Tuple[int, int, int]]:
    """Deterministic ear clipping, lowest-index ear first."""
    if _polygon_area(pts) <= 0:
        raise NonSimplePolygon(f"polygon {pid!r} is not counterclockwise")
    idx = list(range(len(pts)))
    tris = []
    while len(idx) > 3:
        m = len(idx)
        for k in range(m):
            i0, i1, i2 = idx[k - 1], idx[k], idx[(k + 1) % m]
            a, b, c = pts[i0], pts[i1], pts[i2]
            if orientation(a, b, c) != 1:
                continue
            blocked = False
            for j in idx:
                if j in (i0, i1, i2):
                    continue
                q = pts[j]
                if orientation(a, b, q) >= 0 and orientation(b, c, q) >= 0 and orientation(c, a, q) >= 0:
                    blocked = True
                    break
            if not blocked:
                tris.append((i0, i1, i2))
                del idx[k]
                break
        else:
            raise NonSimplePolygon(f"polygon {pid!r} has no ear (not simple)")
    a, b, c = (pts[i] for i in idx)
    if orientation(a, b, c) != 1:
        raise NonSimplePolygon(f"polygon {pid!r} degenerates")
    tris.append(tuple(idx))
    return tris


def triangulate(p: PolygonPresentation) -> Triangulation:
    """Triangulate every polygon by ear clipping and install the gluings."""
    p.validate()
    vec: List[Vec2] = []
    opp: List[int] = []
    side_he: Dict[EdgeRef, int] = {}
    for pid, pts in p.polygons.items():
        n = len(pts)
        diag: Dict[Tuple[int, int], int] = {}
        for tri in _ear_clip(pts, pid):
            for k in range(3):
                i, j = tri[k], tri[(k + 1) % 3]
                h = len(vec)
                vec.append(pts[j] - pts[i])
                opp.append(-1)
                if j == (i + 1) % n:
                    side_he[(pid, i)] = h
                else:
                    other = diag.pop((j, i), None)
                    if other is None:
                        diag[(i, j)] = h
                    else:
                        opp[h] = other
                        opp[other] = h
        if diag:
            raise NonSimplePolygon(f"polygon {pid!r}: inconsistent ear clipping")
    for a, b in p.gluings:
        ha, hb = side_he[a], side_he[b]
        opp[ha] = hb
        opp[hb] = ha
    return Triangulation(vec, opp, p.name)


# ---------------------------------------------------------------------------
# permutation construction


def permutation_presentation(sigma, tau, u, v, name: str = "permsurface") -> PolygonPresentation:
    """``n`` parallelograms with sides u and v; the left side of cell i is
    glued to the right side of cell sigma(i) and the top of cell i to the
    bottom of cell tau(i).  Permutations are 0-based image lists."""
    n = len(sigma)
    if n < 1 or len(tau) != n:
        raise DegenerateCell("need two permutations of the same positive size")
    if sorted(sigma) != list(range(n)) or sorted(tau) != list(range(n)):
        raise DegenerateCell("sigma and tau must be permutations")
    u, v = Vec2(*u), Vec2(*v)
    if orientation((0.0, 0.0), u, u + v) != 1 or orientation((0.0, 0.0), u, v) != 1:
        raise DegenerateCell("cell sides must be positively oriented and independent")
    polys = {}
    glue = []
    for i in range(n):
        polys[f"P{i + 1}"] = [Vec2(0.0, 0.0), u, u + v, v]
    for i in range(n):
        glue.append(((f"P{i + 1}", 3), (f"P{sigma[i] + 1}", 1)))
        glue.append(((f"P{i + 1}", 2), (f"P{tau[i] + 1}", 0)))
    return PolygonPresentation(name, polys, glue)


def triangle_presentation(T: Triangulation, name: Optional[str] = None) -> PolygonPresentation:
    """One polygon per triangle, glued as in ``T``."""
    polys = {f"t{t}": list(T.triangle_points(t)) for t in range(T.num_triangles)}
    glue = [((f"t{h // 3}", h % 3), (f"t{T.opp[h] // 3}", T.opp[h] % 3)) for h in T.edges()]
    return PolygonPresentation(name or T.name, polys, glue)


def from_permutations(sigma, tau, u, v, name: str = "permsurface") -> Triangulation:
    return triangulate(permutation_presentation(sigma, tau, u, v, name))


def commutator(sigma: Sequence[int], tau: Sequence[int]) -> List[int]:
    """[sigma, tau] = sigma tau sigma^-1 tau^-1 (composition right to left)."""
    n = len(sigma)
    si = [0] * n
    ti = [0] * n
    for i in range(n):
        si[sigma[i]] = i
        ti[tau[i]] = i
    return [sigma[tau[si[ti[i]]]] for i in range(n)]


def cycle_type(perm: Sequence[int]) -> List[int]:
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if not seen[i]:
            k = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                k += 1
            out.append(k)
    return sorted(out, reverse=True)


# ---------------------------------------------------------------------------
# invariants


def cone_points(T: Triangulation) -> List[ConePoint]:
    return T.cone_points()


def invariants(T: Triangulation) -> SurfaceInfo:
    """Genus (Euler characteristic), stratum, area; checks Gauss-Bonnet."""
    cones = T.cone_points()
    V = len(cones)
    E = len(T.edges())
    F = T.num_triangles
    chi = V - E + F
    if chi % 2:
        raise GaussBonnetMismatch(f"odd Euler characteristic {chi}")
    g = (2 - chi) // 2
    curvature = sum(c.angle - TWO_PI for c in cones)
    tol = numeric.get_eps() * max(1, 3 * F)
    if abs(curvature - TWO_PI * (2 * g - 2)) > max(tol, 1e-7):
        raise GaussBonnetMismatch(
            f"total cone excess {curvature:.12g} != 2pi(2g-2) for g={g}"
        )
    for c in cones:
        if abs(c.angle - TWO_PI * (c.order + 1)) > 1e-7:
            raise GaussBonnetMismatch(f"cone angle {c.angle} is not a multiple of 2pi")
    orders = sorted((c.order for c in cones if c.order > 0), reverse=True)
    return SurfaceInfo(
        genus=g,
        stratum=tuple(orders),
        area=T.area(),
        num_zeros=len(orders),
        num_marked=sum(1 for c in cones if c.order == 0),
        num_vertices=V,
        num_edges=E,
        num_triangles=F,
    )
