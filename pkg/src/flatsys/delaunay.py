"""Delaunay triangulation by edge flips and the Delaunay cell decomposition."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from . import numeric
from .errors import FlipLimitExceeded, NonConvexCell
from .numeric import Vec2, in_circumcircle, orientation
from .surface import Triangulation, next_he, prev_he


class EdgeStatus(str, Enum):
    YES = "yes"
    COCIRCULAR = "cocircular"
    NO = "no"


def edge_quad(T: Triangulation, h: int) -> Tuple[Vec2, Vec2, Vec2, Vec2]:
    """Develop the two triangles at the edge of ``h`` into one plane.

    Returns (A, B, C, D): ``h`` runs A -> B, C is the apex of its triangle
    and D the apex of the triangle across the edge.
    """
    A = Vec2(0.0, 0.0)
    B = T.vec[h]
    C = B + T.vec[next_he(h)]
    D = A + T.vec[next_he(T.opp[h])]
    return A, B, C, D


def is_delaunay_edge(T: Triangulation, h: int) -> EdgeStatus:
    A, B, C, D = edge_quad(T, h)
    s = in_circumcircle(A, B, C, D)
    if s > 0:
        return EdgeStatus.NO
    if s == 0:
        return EdgeStatus.COCIRCULAR
    return EdgeStatus.YES


def _triangle_angles(a: Vec2, b: Vec2, c: Vec2) -> List[float]:
    out = []
    for p, q, r in ((a, b, c), (b, c, a), (c, a, b)):
        u, v = q - p, r - p
        out.append(math.atan2(abs(u.cross(v)), u.dot(v)))
    return out


def _flip_in_place(T: Triangulation, h: int) -> None:
    A, B, C, D = edge_quad(T, h)
    before = sorted(_triangle_angles(A, B, C) + _triangle_angles(B, A, D))
    if orientation(D, C, A) != 1 or orientation(C, D, B) != 1:
        raise FlipLimitExceeded(f"edge {h} is not flippable (quadrilateral not convex)")
    after = sorted(_triangle_angles(D, C, A) + _triangle_angles(C, D, B))
    # flipping a non-Delaunay edge increases the sorted angle vector
    assert after >= [x - 1e-12 for x in before], "flip decreased the angle vector"
    T.flip(h)


def delaunay_flip(T: Triangulation) -> Triangulation:
    """Return a Delaunay triangulation of the same surface (private copy)."""
    D = T.copy()
    limit = 10 * len(D.edges()) ** 2
    flips = 0
    while True:
        target = None
        for h in D.edges():
            if h // 3 == D.opp[h] // 3:
                continue
            if is_delaunay_edge(D, h) is EdgeStatus.NO:
                target = h
                break
        if target is None:
            return D
        if flips >= limit:
            raise FlipLimitExceeded(f"more than {limit} flips")
        _flip_in_place(D, target)
        flips += 1


def is_delaunay(T: Triangulation) -> bool:
    return all(is_delaunay_edge(T, h) is not EdgeStatus.NO for h in T.edges())


@dataclass
class Cell:
    vertices: List[Vec2]  # developed, counterclockwise
    triangles: List[int]
    boundary: List[int]  # half-edges along the boundary, ccw
    origins: Dict[int, Vec2] = field(default_factory=dict)  # slot-0 vertex of each triangle

    @property
    def sides(self) -> int:
        return len(self.vertices)

    def signature(self):
        return cell_signature(self.vertices)


@dataclass
class DelaunayEdge:
    halfedge: int
    vector: Vec2

    @property
    def length(self) -> float:
        return self.vector.length()


@dataclass
class CellDecomposition:
    triangulation: Triangulation
    cells: List[Cell]
    edges: List[DelaunayEdge]
    num_vertices: int
    cell_of_triangle: Dict[int, int] = field(default_factory=dict)

    @property
    def counts(self) -> Tuple[int, int, int]:
        return len(self.cells), len(self.edges), self.num_vertices

    def all_triangles(self) -> bool:
        return all(c.sides == 3 for c in self.cells)


def cell_signature(vertices: List[Vec2], digits: int = 12):
    """Translation- and rotation-of-labels invariant key of a developed cell."""
    best = None
    n = len(vertices)
    for seq in (list(vertices), list(reversed(vertices))):
        for r in range(n):
            rot = seq[r:] + seq[:r]
            x0, y0 = rot[0]
            key = tuple(
                (round(p[0] - x0, digits) + 0.0, round(p[1] - y0, digits) + 0.0) for p in rot
            )
            if best is None or key < best:
                best = key
    return best


def delaunay_cells(T: Triangulation) -> CellDecomposition:
    """Merge triangles across cocircular edges into convex cells."""
    n_tri = T.num_triangles
    internal = [False] * T.num_half_edges
    parent = list(range(n_tri))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for h in T.edges():
        if h // 3 == T.opp[h] // 3:
            continue
        if is_delaunay_edge(T, h) is EdgeStatus.COCIRCULAR:
            internal[h] = internal[T.opp[h]] = True
            parent[find(h // 3)] = find(T.opp[h] // 3)

    groups: Dict[int, List[int]] = {}
    for t in range(n_tri):
        groups.setdefault(find(t), []).append(t)

    cells: List[Cell] = []
    cell_of: Dict[int, int] = {}
    for tris in sorted(groups.values(), key=min):
        # develop the group: position of the slot-0 vertex of each triangle
        pos = {tris[0]: Vec2(0.0, 0.0)}
        stack = [tris[0]]
        while stack:
            t = stack.pop()
            for h in range(3 * t, 3 * t + 3):
                if not internal[h]:
                    continue
                g = T.opp[h]
                u = g // 3
                p = pos[t] + T.local_start(h) + T.vec[h] - T.local_start(g)
                if u in pos:
                    if (pos[u] - p).length() > 1e-7 * max(1.0, p.length()):
                        raise NonConvexCell("cell does not develop injectively")
                    continue
                pos[u] = p
                stack.append(u)
        bset = [h for t in tris for h in range(3 * t, 3 * t + 3) if not internal[h]]
        start = min(bset)
        walk = []
        h = start
        while True:
            walk.append(h)
            n = next_he(h)
            steps = 0
            while internal[n]:
                n = next_he(T.opp[n])
                steps += 1
                if steps > 3 * n_tri:
                    raise NonConvexCell("boundary walk does not close")
            h = n
            if h == start:
                break
            if len(walk) > len(bset):
                raise NonConvexCell("boundary walk does not close")
        if len(walk) != len(bset) or len(tris) != len(walk) - 2:
            raise NonConvexCell("merged cocircular triangles do not form a disc")
        verts = [pos[h // 3] + T.local_start(h) for h in walk]
        last = verts[-1] + T.vec[walk[-1]]
        if (last - verts[0]).length() > 1e-7 * max(1.0, last.length()):
            raise NonConvexCell("cell boundary does not close")
        m = len(verts)
        for i in range(m):
            if orientation(verts[i - 1], verts[i], verts[(i + 1) % m]) != 1:
                raise NonConvexCell("cell is not strictly convex")
        idx = len(cells)
        for t in tris:
            cell_of[t] = idx
        cells.append(Cell(verts, sorted(tris), walk, dict(pos)))

    edges = [DelaunayEdge(h, T.vec[h]) for h in T.edges() if not internal[h]]
    return CellDecomposition(T, cells, edges, T.num_vertices, cell_of)


def delaunay_decomposition(T: Triangulation) -> CellDecomposition:
    return delaunay_cells(delaunay_flip(T))


def shortest_cone_arc(T: Triangulation) -> float:
    """Length of the shortest arc between vertex-set points (a Delaunay edge)."""
    D = delaunay_flip(T)
    return min(D.vec[h].length() for h in D.edges())


def edge_bounds(genus: int, v: int) -> Tuple[int, int]:
    """Maximal number of Delaunay edges and cells."""
    return 6 * genus - 6 + 3 * v, 4 * genus - 4 + 2 * v
