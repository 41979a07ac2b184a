"""Integral first homology via a tree-cotree decomposition.

A spanning tree of the vertex-edge graph and a spanning tree of the dual graph
(using the remaining edges) leave exactly 2g generator edges.  Every other
non-tree edge is expressed in the generators by peeling triangles off the
dual tree, leaves first.
"""

from __future__ import annotations

from collections import deque
from typing import Dict, Iterable, List, Sequence, Tuple

from .saddle import SaddleConnection
from .surface import Triangulation, next_he, prev_he


def _edge(T: Triangulation, h: int) -> Tuple[int, int]:
    """(canonical half-edge, sign) of a traversed half-edge."""
    o = T.opp[h]
    return (h, 1) if h < o else (o, -1)


class HomologyBasis:
    def __init__(self, T: Triangulation):
        self.T = T
        n = T.num_half_edges
        V = T.num_vertices
        # spanning tree of the vertex-edge graph
        out_edges: Dict[int, List[int]] = {}
        for h in range(n):
            out_edges.setdefault(T.vertex(h), []).append(h)
        tree = set()
        seen = {0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for h in out_edges[v]:
                w = T.vertex(next_he(h))
                if w not in seen:
                    seen.add(w)
                    tree.add(_edge(T, h)[0])
                    queue.append(w)
        if len(seen) != V:
            raise ValueError("vertex graph is not connected")
        # spanning tree of the dual graph avoiding primal tree edges
        parent_edge: Dict[int, int] = {}
        order = [0]
        dual = set()
        seen_t = {0}
        queue = deque([0])
        while queue:
            t = queue.popleft()
            for h in range(3 * t, 3 * t + 3):
                e = _edge(T, h)[0]
                if e in tree:
                    continue
                u = T.opp[h] // 3
                if u not in seen_t:
                    seen_t.add(u)
                    dual.add(e)
                    parent_edge[u] = e
                    order.append(u)
                    queue.append(u)
        self.tree = tree
        self.dual = dual
        self.generators = [e for e in T.edges() if e not in tree and e not in dual]
        self.rank = len(self.generators)
        rep: Dict[int, List[int]] = {}
        for i, e in enumerate(self.generators):
            v = [0] * self.rank
            v[i] = 1
            rep[e] = v
        for t in reversed(order[1:]):
            e = parent_edge[t]
            coeff = self._boundary(t)
            s_e = coeff.pop(e)
            acc = [0] * self.rank
            for f, c in coeff.items():
                if f in tree or c == 0:
                    continue
                r = rep[f]
                for k in range(self.rank):
                    acc[k] += c * r[k]
            rep[e] = [-s_e * a for a in acc]
        self.rep = rep
        # the root triangle's boundary must vanish
        if any(self.chain_class(self._boundary(order[0]))):
            raise AssertionError("homology reduction is inconsistent")

    def _boundary(self, t: int) -> Dict[int, int]:
        coeff: Dict[int, int] = {}
        for h in range(3 * t, 3 * t + 3):
            e, s = _edge(self.T, h)
            coeff[e] = coeff.get(e, 0) + s
        return coeff

    def chain_class(self, chain: Dict[int, int]) -> Tuple[int, ...]:
        acc = [0] * self.rank
        for e, c in chain.items():
            if c == 0 or e in self.tree:
                continue
            r = self.rep[e]
            for k in range(self.rank):
                acc[k] += c * r[k]
        return tuple(acc)

    def path_class(self, halfedges: Sequence[int]) -> Tuple[int, ...]:
        """Class of a closed path given as traversed half-edges."""
        T = self.T
        for a, b in zip(halfedges, list(halfedges[1:]) + list(halfedges[:1])):
            if T.vertex(next_he(a)) != T.vertex(b):
                raise ValueError("edge path is not closed")
        chain: Dict[int, int] = {}
        for h in halfedges:
            e, s = _edge(T, h)
            chain[e] = chain.get(e, 0) + s
        return self.chain_class(chain)


def connection_edge_path(T: Triangulation, sc: SaddleConnection) -> List[int]:
    """Edge path homotopic (rel endpoints) to a saddle connection: it follows
    the left-hand ends of the edges the connection crosses."""
    h = sc.start_corner
    if not sc.path:
        return [h]
    out = [T.opp[prev_he(h)]]
    path = sc.path
    for i, w in enumerate(path):
        g = T.opp[w]
        if i + 1 < len(path):
            if path[i + 1] == next_he(g):
                out.append(T.opp[prev_he(g)])
        else:
            out.append(T.opp[prev_he(g)])
    return out


def curve_edge_path(T: Triangulation, segments: Iterable[SaddleConnection]) -> List[int]:
    out: List[int] = []
    for s in segments:
        out.extend(connection_edge_path(T, s))
    return out


def homology_class(T: Triangulation, geo, basis: HomologyBasis = None) -> Tuple[int, ...]:
    """Homology class of a closed geodesic (a chain of saddle connections on
    ``T``), as integer coefficients on the generators of ``basis``."""
    basis = basis or HomologyBasis(T)
    return basis.path_class(curve_edge_path(T, geo.segments))
