"""SVG pictures of triangulated surfaces.

Triangles are laid out by developing a breadth-first spanning tree of the
dual graph, so glued sides inside the tree coincide and every other side
appears twice on the outline; both copies get the same color.
"""

from __future__ import annotations

from collections import deque
from typing import Dict, List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

from .numeric import Vec2
from .surface import Triangulation

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def layout(T: Triangulation) -> Tuple[Dict[int, Vec2], set]:
    """Plane position of the slot-0 vertex of every triangle, and the set of
    canonical edges used by the spanning tree."""
    origin = {0: Vec2(0.0, 0.0)}
    tree = set()
    queue = deque([0])
    while queue:
        t = queue.popleft()
        for h in range(3 * t, 3 * t + 3):
            g = T.opp[h]
            u = g // 3
            if u in origin:
                continue
            origin[u] = origin[t] + T.local_start(h) + T.vec[h] - T.local_start(g)
            tree.add(min(h, g))
            queue.append(u)
    return origin, tree


def _fmt(x: float) -> str:
    s = f"{x:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Canvas:
    def __init__(self):
        self.items: List[str] = []
        self.points: List[Vec2] = []

    def line(self, a: Vec2, b: Vec2, **attrs):
        self.points += [a, b]
        extra = "".join(f' {k.replace("_", "-")}="{escape(str(v))}"' for k, v in attrs.items())
        self.items.append(
            f'<line x1="{_fmt(a.x)}" y1="{_fmt(-a.y)}" x2="{_fmt(b.x)}" y2="{_fmt(-b.y)}"{extra}/>'
        )

    def polygon(self, pts: Sequence[Vec2], **attrs):
        self.points += list(pts)
        coords = " ".join(f"{_fmt(p.x)},{_fmt(-p.y)}" for p in pts)
        extra = "".join(f' {k.replace("_", "-")}="{escape(str(v))}"' for k, v in attrs.items())
        self.items.append(f'<polygon points="{coords}"{extra}/>')

    def dot(self, p: Vec2, r: float, **attrs):
        self.points.append(p)
        extra = "".join(f' {k.replace("_", "-")}="{escape(str(v))}"' for k, v in attrs.items())
        self.items.append(f'<circle cx="{_fmt(p.x)}" cy="{_fmt(-p.y)}" r="{_fmt(r)}"{extra}/>')

    def open(self, tag: str):
        self.items.append(tag)

    def document(self, title: str, width: int = 800) -> str:
        xs = [p.x for p in self.points] or [0.0]
        ys = [-p.y for p in self.points] or [0.0]
        x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
        span = max(x1 - x0, y1 - y0, 1e-9)
        m = 0.05 * span
        vb = f"{_fmt(x0 - m)} {_fmt(y0 - m)} {_fmt(x1 - x0 + 2 * m)} {_fmt(y1 - y0 + 2 * m)}"
        height = max(1, round(width * (y1 - y0 + 2 * m) / (x1 - x0 + 2 * m)))
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
            f'height="{height}" viewBox="{vb}">\n'
            f"<title>{escape(title)}</title>\n"
        )
        return head + "\n".join(self.items) + "\n</svg>\n"


def render(T: Triangulation, delaunay: bool = False, classes=None,
           fixed_points=None, title: Optional[str] = None) -> str:
    """SVG document for ``T``.

    ``classes`` is a list of systole classes and ``fixed_points`` a list of
    located points; both must refer to ``T`` itself (pass the Delaunay
    triangulation the analysis returned).
    """
    from .delaunay import delaunay_cells, is_delaunay
    from .flow import segment_pieces

    origin, tree = layout(T)
    c = _Canvas()
    # scale-aware stroke widths
    span = max(T.vec[h].length() for h in range(T.num_half_edges))
    w = span / 150
    c.open('<g class="triangles">')
    for t in range(T.num_triangles):
        pts = [origin[t] + p for p in T.triangle_points(t)]
        c.polygon(pts, fill="#f4f4f4", stroke="#c8c8c8", stroke_width=_fmt(w / 2))
    c.open("</g>")
    pair = {e: i for i, e in enumerate(e for e in T.edges() if e not in tree)}
    c.open('<g class="glued-sides">')
    for h in range(T.num_half_edges):
        e = min(h, T.opp[h])
        if e in tree:
            continue
        t = h // 3
        a = origin[t] + T.local_start(h)
        c.line(a, a + T.vec[h], stroke=PALETTE[pair[e] % len(PALETTE)], stroke_width=_fmt(2 * w),
               data_pair=pair[e])
    c.open("</g>")
    if delaunay:
        if not is_delaunay(T):
            raise ValueError("Delaunay overlay needs a Delaunay triangulation")
        C = delaunay_cells(T)
        keep = {d.halfedge for d in C.edges}
        c.open('<g class="delaunay">')
        for h in range(T.num_half_edges):
            if min(h, T.opp[h]) not in keep:
                continue
            a = origin[h // 3] + T.local_start(h)
            c.line(a, a + T.vec[h], stroke="#000000", stroke_width=_fmt(w), stroke_dasharray=_fmt(4 * w))
        c.open("</g>")
    if classes:
        c.open('<g class="systoles">')
        for i, cls in enumerate(classes):
            color = PALETTE[i % len(PALETTE)]
            c.open(f'<g class="systole" data-class="{i}" data-kind="{cls.kind}">')
            for s in cls.representative.segments:
                for (t, a, b) in segment_pieces(T, s.start_corner, s.path, s.holonomy):
                    c.line(origin[t] + a, origin[t] + b, stroke=color, stroke_width=_fmt(3 * w),
                           stroke_linecap="round")
            c.open("</g>")
        c.open("</g>")
    if fixed_points:
        c.open('<g class="weierstrass">')
        for fp in fixed_points:
            c.dot(origin[fp.triangle] + fp.point, 4 * w, fill="#000000")
        c.open("</g>")
    return c.document(title or T.name)
