import random
from collections import deque

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from flatsys import catalog, catalog_names
from flatsys.homology import HomologyBasis, curve_edge_path, homology_class
from flatsys.numeric import Vec2
from flatsys.surface import invariants, next_he
from flatsys.systole import compute_systole

from conftest import STRATA, random_surface


def _out_edges(T):
    out = {}
    for h in range(T.num_half_edges):
        out.setdefault(T.vertex(h), []).append(h)
    return out


def _path_home(T, out, v):
    """Half-edges from v back to vertex 0 along a BFS tree."""
    prev = {v: None}
    queue = deque([v])
    while queue:
        w = queue.popleft()
        if w == 0:
            break
        for h in out[w]:
            x = T.vertex(next_he(h))
            if x not in prev:
                prev[x] = h
                queue.append(x)
    path = []
    w = 0
    while prev[w] is not None:
        path.append(prev[w])
        w = T.vertex(prev[w])
    return path[::-1]


def random_closed_walk(T, rng, length):
    out = _out_edges(T)
    v = 0
    walk = []
    for _ in range(length):
        h = rng.choice(out[v])
        walk.append(h)
        v = T.vertex(next_he(h))
    return walk + _path_home(T, out, v)


def _holonomy(T, walk):
    s = Vec2(0.0, 0.0)
    for h in walk:
        s = s + T.vec[h]
    return s


@pytest.mark.parametrize("name", catalog_names())
def test_rank_is_twice_the_genus(name):
    T = catalog(name)
    assert HomologyBasis(T).rank == 2 * invariants(T).genus


@given(st.integers(0, 10_000), st.sampled_from(sorted(STRATA)))
def test_boundaries_and_backtracks_vanish(seed, stratum):
    T = random_surface(seed, stratum)
    B = HomologyBasis(T)
    assert B.rank == 2 * invariants(T).genus
    zero = (0,) * B.rank
    for t in range(T.num_triangles):
        assert B.path_class([3 * t, 3 * t + 1, 3 * t + 2]) == zero
    for h in range(T.num_half_edges):
        assert B.path_class([h, T.opp[h]]) == zero


def test_torus_generators():
    T = catalog("square-torus")
    B = HomologyBasis(T)
    classes = {B.path_class([h]) for h in T.edges()}
    # three edges of a once-marked torus: every pair spans the lattice
    assert len(classes) == 3
    vs = [np.array(c) for c in classes]
    for i in range(3):
        for j in range(i + 1, 3):
            assert abs(round(np.linalg.det(np.stack([vs[i], vs[j]])))) == 1


def test_open_path_is_rejected():
    T = catalog("x10")
    h = next(h for h in range(T.num_half_edges) if T.vertex(h) != T.vertex(next_he(h)))
    with pytest.raises(ValueError):
        HomologyBasis(T).path_class([h])


@pytest.mark.parametrize("seed, stratum", [(s, st_) for s in range(4) for st_ in sorted(STRATA)])
def test_holonomy_factors_through_homology(seed, stratum):
    T = random_surface(seed, stratum)
    B = HomologyBasis(T)
    rng = random.Random(seed)
    rows, hols = [], []
    for _ in range(6 * B.rank):
        w = random_closed_walk(T, rng, rng.randint(1, 12))
        rows.append(B.path_class(w))
        h = _holonomy(T, w)
        hols.append((h.x, h.y))
    A = np.array(rows, dtype=float)
    Y = np.array(hols)
    M, *_ = np.linalg.lstsq(A, Y, rcond=None)
    assert np.abs(A @ M - Y).max() < 1e-9
    # and the walks span the whole homology
    assert np.linalg.matrix_rank(A) == B.rank


@pytest.mark.parametrize("name", ["x10", "maxratio-h11", "genus3-15", "hyperelliptic-g3"])
def test_systole_edge_paths_carry_the_curve_holonomy(name):
    r = compute_systole(catalog(name))
    T = r.triangulation
    B = HomologyBasis(T)
    for g in r.geodesics:
        path = curve_edge_path(T, g.segments)
        assert (_holonomy(T, path) - g.holonomy).length() < 1e-9
        c = homology_class(T, g, B)
        # systoles are never null-homologous on these surfaces
        assert any(c)
