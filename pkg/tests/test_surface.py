import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flatsys import catalog, catalog_names, parse_surface, triangulate
from flatsys.catalog import catalog_text, slit_tori
from flatsys.errors import (
    DegenerateCell,
    NonSimplePolygon,
    NonTranslationGluing,
    ParseError,
    UnbalancedGluing,
    UnknownName,
)
from flatsys.surface import (
    commutator,
    cycle_type,
    cycles_to_perm,
    format_surface,
    from_permutations,
    invariants,
    permutation_presentation,
    triangle_presentation,
)

from conftest import _transitive, random_surface

SQUARE = """surface sq
polygon P
v 0 0
v 1 0
v 1 1
v 0 1
glue P.e0 P.e2
glue P.e1 P.e3
"""


def test_square_torus_from_polygon_file():
    T = triangulate(parse_surface(SQUARE))
    info = invariants(T)
    assert (info.genus, info.stratum, info.num_vertices) == (1, (), 1)
    assert info.area == pytest.approx(1.0)
    assert T.num_triangles == 2


def test_comments_and_blank_lines_are_ignored():
    text = "# header\n\n" + SQUARE.replace("v 1 0", "v 1 0   # corner")
    assert parse_surface(text).area() == pytest.approx(1.0)


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("polygon P\n", 1),
        ("surface s\nv 0 0\n", 2),
        ("surface s\npolygon P\nv 0 zero\n", 3),
        ("surface s\npolygon P\nv 0 0\nglue P.x0 P.e1\n", 4),
        ("surface s\npolygon P\nfrobnicate\n", 3),
        ("permsurface p\nsigma (1 2\n", 2),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as exc:
        parse_surface(text)
    assert exc.value.line == line


def test_gluing_errors():
    with pytest.raises(UnbalancedGluing):
        parse_surface(SQUARE.replace("glue P.e1 P.e3\n", ""))
    with pytest.raises(UnbalancedGluing):
        parse_surface(SQUARE + "glue P.e1 P.e2\n")
    bad = SQUARE.replace("v 1 1", "v 1 2").replace("v 0 1", "v 0 1.5")
    with pytest.raises(NonTranslationGluing):
        parse_surface(bad)


def test_clockwise_polygon_is_rejected():
    text = SQUARE.replace("v 1 0\nv 1 1\nv 0 1", "v 0 1\nv 1 1\nv 1 0")
    with pytest.raises((NonSimplePolygon, NonTranslationGluing)):
        triangulate(parse_surface(text))


def test_cycle_notations_agree():
    perms = []
    for text in ("(12345)", "(1 2 3 4 5)", "(1,2,3,4,5)"):
        pres = parse_surface(f"permsurface p\nsigma {text}\ntau (1)(2)(3)(4)(5)\ncell 1 0 0 1\n")
        perms.append([g for g in pres.gluings])
    assert perms[0] == perms[1] == perms[2]
    assert cycles_to_perm([[1, 2, 3]], 3) == [1, 2, 0]


def test_degenerate_cell_is_rejected():
    with pytest.raises(DegenerateCell):
        permutation_presentation([0], [0], (1, 0), (2, 0))


def test_unknown_catalog_name():
    with pytest.raises(UnknownName):
        catalog("no-such-surface")
    with pytest.raises(UnknownName):
        catalog_text("nope")


EXPECTED_TOPOLOGY = {
    "x10": (2, (1, 1)),
    "maxratio-h11": (2, (1, 1)),
    "equilateral-h2": (2, (2,)),
    "genus3-15": (3, (4,)),
    "genus4-21": (4, (6,)),
    "genus5-27": (5, (8,)),
    "hyperelliptic-g2": (2, (2,)),
    "hyperelliptic-g3": (3, (4,)),
    "hyperelliptic-g4": (4, (6,)),
    "hyperelliptic-g5": (5, (8,)),
    "hyperelliptic-g6": (6, (10,)),
    "square-torus": (1, ()),
    "hex-torus": (1, ()),
}


@pytest.mark.parametrize("name", catalog_names())
def test_catalog_topology_and_gauss_bonnet(name):
    T = catalog(name)
    info = invariants(T)
    assert (info.genus, info.stratum) == EXPECTED_TOPOLOGY[name]
    # a flat torus has no zeros; its single vertex is a marked point
    assert info.num_marked == (1 if info.genus == 1 else 0)
    total = sum(c.angle - 2 * math.pi for c in T.cone_points())
    assert total == pytest.approx(2 * math.pi * (2 * info.genus - 2))


def test_x10_and_maxratio_areas():
    assert catalog("x10").area() == pytest.approx(4 * math.sqrt(3))
    a = (math.sqrt(13) - 3) / 2
    hexagon = math.sqrt(3) / 4 * (1 - 3 * a * a)
    assert catalog("maxratio-h11").area() == pytest.approx(2 * hexagon)


def test_printed_genus3_pair_has_genus3_and_one_zero():
    # sigma = (12345), tau = (15243)
    s = cycles_to_perm([[1, 2, 3, 4, 5]], 5)
    t = cycles_to_perm([[1, 5, 2, 4, 3]], 5)
    info = invariants(from_permutations(s, t, (1, 0), (0.5, math.sqrt(3) / 2)))
    assert info.genus == 3
    assert info.stratum == (4,)
    assert [c.angle for c in catalog("genus3-15").cone_points()] == pytest.approx([10 * math.pi])
    assert [c.angle for c in from_permutations(s, t, (1, 0), (0, 1)).cone_points()] == pytest.approx(
        [10 * math.pi]
    )


def test_commutator_cycle_type_predicts_stratum():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randint(2, 6)
        s = list(range(n))
        t = list(range(n))
        rng.shuffle(s)
        rng.shuffle(t)
        if not _transitive(s, t):
            continue
        T = from_permutations(s, t, (1, 0), (0.3, 1))
        angles = sorted(round(c.angle / (2 * math.pi)) for c in T.cone_points())
        # each cone angle is 2pi times a cycle length of the commutator
        assert sum(angles) == n
        assert angles == sorted(cycle_type(commutator(s, t)))


def test_format_parse_round_trip():
    for name in ("x10", "equilateral-h2"):
        T = catalog(name)
        text = format_surface(triangle_presentation(T))
        S = triangulate(parse_surface(text))
        assert invariants(S) == invariants(T)


def test_slit_tori_surface():
    T = slit_tori(0.4)
    info = invariants(T)
    assert (info.genus, info.stratum, info.area) == (2, (1, 1), pytest.approx(2.0))
    with pytest.raises(ValueError):
        slit_tori(1.5)


def _check_halfedges(T):
    for h in range(T.num_half_edges):
        assert T.opp[T.opp[h]] == h
        assert (T.vec[h] + T.vec[T.opp[h]]).length() < 1e-12
    for t in range(T.num_triangles):
        s = T.vec[3 * t] + T.vec[3 * t + 1] + T.vec[3 * t + 2]
        assert s.length() < 1e-9
        assert T.triangle_area(t) > 0


@given(st.integers(0, 10_000), st.sampled_from([(2,), (1, 1)]))
def test_flips_preserve_surface(seed, stratum):
    T = random_surface(seed, stratum)
    info = invariants(T)
    rng = random.Random(seed)
    S = T.copy()
    flips = 0
    for _ in range(20):
        h = rng.randrange(S.num_half_edges)
        from flatsys.delaunay import edge_quad
        from flatsys.numeric import orientation

        A, B, C, D = edge_quad(S, h)
        if h // 3 == S.opp[h] // 3 or orientation(D, C, A) != 1 or orientation(C, D, B) != 1:
            continue
        S.flip(h)
        flips += 1
        _check_halfedges(S)
    assert S.area() == pytest.approx(T.area())
    assert invariants(S).stratum == info.stratum
    assert sorted(c.angle for c in S.cone_points()) == pytest.approx(sorted(c.angle for c in T.cone_points()))


@given(st.integers(0, 10_000))
def test_random_surfaces_are_consistent(seed):
    T = random_surface(seed, (1, 1))
    _check_halfedges(T)
    for v in range(T.num_vertices):
        corners = T.cone_points()[v].corners
        offs = sorted(T.corner_offset(h) for h in corners)
        assert offs[0] == 0.0
        assert offs[-1] < T.vertex_angle(v)
