"""Isometric involutions with derivative -1 (hyperelliptic involutions).

Such an isometry preserves the Delaunay decomposition, so it is a rotation
by pi of each Delaunay cell onto a cell with negated side vectors.  The
search anchors cell 0 on every compatible (cell, rotation) and propagates
across glued sides.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .delaunay import CellDecomposition, delaunay_cells, delaunay_flip
from .errors import FixedPointCountMismatch
from .flow import point_in_triangle
from .numeric import Vec2
from .surface import Triangulation, invariants

VEC_TOL = 1e-7


@dataclass(frozen=True)
class FixedPoint:
    kind: str  # "vertex", "edge" or "face"
    triangle: int
    point: Vec2  # local coordinates in the triangle
    vertex: Optional[int] = None
    edge: Optional[int] = None  # canonical half-edge; the point is its midpoint
    cell: Optional[int] = None

    def describe(self) -> dict:
        d = {"kind": self.kind, "triangle": self.triangle, "local": [self.point.x, self.point.y]}
        if self.vertex is not None:
            d["vertex"] = self.vertex
        if self.edge is not None:
            d["edge"] = self.edge
            d["parameter"] = 0.5
        if self.cell is not None:
            d["cell"] = self.cell
        return d


@dataclass
class Involution:
    triangulation: Triangulation  # Delaunay triangulation the data refers to
    cells: CellDecomposition
    side_map: Dict[int, int]  # boundary half-edge -> image boundary half-edge
    cell_map: List[int]
    offsets: List[Vec2]  # per cell: image of y is offsets[c] - y (image cell frame)
    vertex_map: List[int]
    shift: List[float]  # angular position shift per vertex
    fixed_points: List[FixedPoint] = field(default_factory=list)

    def map_point(self, t: int, p: Vec2) -> Tuple[int, Vec2]:
        C = self.cells
        X = C.cell_of_triangle[t]
        Y = self.cell_map[X]
        y = C.cells[X].origins[t] + p
        z = self.offsets[X] - y
        cell = C.cells[Y]
        best = None
        for u in cell.triangles:
            q = z - cell.origins[u]
            if point_in_triangle(self.triangulation, u, q, 1e-9):
                return u, q
            if best is None:
                best = (u, q)
        raise ValueError("image point not found in the image cell")

    def map_position(self, v: int, pos: float) -> Tuple[int, float]:
        w = self.vertex_map[v]
        A = self.triangulation.vertex_angle(w)
        p = (pos + self.shift[v]) % A
        if A - p < 1e-10:
            p = 0.0
        return w, p

    def triangle_permutation(self) -> Optional[List[int]]:
        """Image triangle of each triangle, or None if some triangle is not
        mapped onto a triangle (possible inside non-triangular cells)."""
        T = self.triangulation
        out = []
        for t in range(T.num_triangles):
            a, b, c = T.triangle_points(t)
            u, q = self.map_point(t, (a + b + c) / 3)
            img = [self.map_point(t, x)[1] for x in (a, b, c)]
            pts = T.triangle_points(u)
            ok = all(min((x - y).length() for y in pts) < 1e-7 for x in img)
            if not ok:
                return None
            out.append(u)
        return out

    @property
    def swaps(self) -> List[Tuple[int, int]]:
        return [(v, w) for v, w in enumerate(self.vertex_map) if v < w]


def _propagate(T: Triangulation, C: CellDecomposition, Y0: int, r0: int):
    side_pos: Dict[int, Tuple[int, int]] = {}
    for ci, cell in enumerate(C.cells):
        for i, b in enumerate(cell.boundary):
            side_pos[b] = (ci, i)

    def matches(X, Y, r):
        cx, cy = C.cells[X], C.cells[Y]
        m = cx.sides
        if cy.sides != m:
            return False
        for i in range(m):
            u = T.vec[cx.boundary[i]]
            v = T.vec[cy.boundary[(i + r) % m]]
            if (u + v).length() > VEC_TOL * max(1.0, u.length()):
                return False
        return True

    if not matches(0, Y0, r0):
        return None
    cell_map: Dict[int, Tuple[int, int]] = {0: (Y0, r0)}
    phi: Dict[int, int] = {}
    queue = deque([0])
    while queue:
        X = queue.popleft()
        Y, r = cell_map[X]
        cx, cy = C.cells[X], C.cells[Y]
        m = cx.sides
        for i in range(m):
            b = cx.boundary[i]
            img = cy.boundary[(i + r) % m]
            if phi.setdefault(b, img) != img:
                return None
            nb, nimg = T.opp[b], T.opp[img]
            X2, i2 = side_pos[nb]
            Y2, k2 = side_pos[nimg]
            r2 = (k2 - i2) % C.cells[X2].sides
            if X2 in cell_map:
                if cell_map[X2] != (Y2, r2):
                    return None
                continue
            if not matches(X2, Y2, r2):
                return None
            cell_map[X2] = (Y2, r2)
            queue.append(X2)
    if len(cell_map) != len(C.cells):
        return None
    if len(set(phi.values())) != len(phi):
        return None
    if any(phi[phi[b]] != b for b in phi):
        return None
    return cell_map, phi


def _build(T: Triangulation, C: CellDecomposition, cell_map, phi) -> Optional[Involution]:
    n_cells = len(C.cells)
    cmap = [cell_map[X][0] for X in range(n_cells)]
    offsets = []
    for X in range(n_cells):
        Y, r = cell_map[X]
        offsets.append(C.cells[X].vertices[0] + C.cells[Y].vertices[r % C.cells[Y].sides])
    V = T.num_vertices
    vmap = [-1] * V
    shift = [None] * V
    for b, img in phi.items():
        v, w = T.vertex(b), T.vertex(img)
        if vmap[v] not in (-1, w):
            return None
        vmap[v] = w
        A = T.vertex_angle(w)
        s = (T.corner_offset(img) - T.corner_offset(b)) % A
        if shift[v] is None:
            shift[v] = s
        else:
            d = abs(shift[v] - s)
            if min(d, A - d) > 1e-7:
                return None
    if -1 in vmap:
        return None
    inv = Involution(T, C, dict(phi), cmap, offsets, vmap, [float(s) for s in shift])
    pts: List[FixedPoint] = []
    for v in range(V):
        if vmap[v] == v:
            h = T.cone_points()[v].corners[0]
            pts.append(FixedPoint("vertex", h // 3, T.local_start(h), vertex=v))
    for b in sorted(phi):
        if phi[b] == T.opp[b] and b < T.opp[b]:
            pts.append(FixedPoint("edge", b // 3, T.local_start(b) + T.vec[b] / 2, edge=b))
    for X in range(n_cells):
        if cmap[X] == X:
            z = offsets[X] / 2
            cell = C.cells[X]
            for u in cell.triangles:
                q = z - cell.origins[u]
                if point_in_triangle(T, u, q, 1e-9):
                    pts.append(FixedPoint("face", u, q, cell=X))
                    break
            else:
                return None
    inv.fixed_points = pts
    return inv


def all_translation_involutions(T: Triangulation) -> List[Involution]:
    D = delaunay_flip(T)
    C = delaunay_cells(D)
    out = []
    m = C.cells[0].sides
    for Y in range(len(C.cells)):
        if C.cells[Y].sides != m:
            continue
        for r in range(m):
            res = _propagate(D, C, Y, r)
            if res is None:
                continue
            inv = _build(D, C, *res)
            if inv is not None:
                out.append(inv)
    return out


def find_translation_involution(T: Triangulation) -> Optional[Involution]:
    """An isometric involution with derivative -1, preferring the one with
    the most fixed points; None if there is none."""
    cands = all_translation_involutions(T)
    if not cands:
        return None
    return max(cands, key=lambda inv: len(inv.fixed_points))


def weierstrass_points(T: Triangulation, inv: Optional[Involution] = None) -> List[FixedPoint]:
    g = invariants(T).genus
    if g != 2:
        raise FixedPointCountMismatch(f"Weierstrass points need genus 2, surface has genus {g}")
    if inv is None:
        inv = find_translation_involution(T)
    if inv is None:
        raise FixedPointCountMismatch("no involution with derivative -1 found")
    if len(inv.fixed_points) != 6:
        raise FixedPointCountMismatch(f"expected 6 fixed points, found {len(inv.fixed_points)}")
    return list(inv.fixed_points)
