import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flatsys import numeric
from flatsys.errors import DegenerateTriangle, ZeroVector
from flatsys.numeric import Vec2, angle_ccw, circle_power, in_circumcircle, orientation


def exact_orientation(a, b, c):
    a, b, c = ([Fraction(x) for x in p] for p in (a, b, c))
    cr = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (cr > 0) - (cr < 0), cr


def exact_incircle(a, b, c, d):
    """Sign of the power of d w.r.t. the circle through ccw a, b, c."""
    rows = []
    for p in (a, b, c):
        dx = Fraction(p[0]) - Fraction(d[0])
        dy = Fraction(p[1]) - Fraction(d[1])
        rows.append((dx, dy, dx * dx + dy * dy))
    (a1, a2, a3), (b1, b2, b3), (c1, c2, c3) = rows
    det = a1 * (b2 * c3 - b3 * c2) - a2 * (b1 * c3 - b3 * c1) + a3 * (b1 * c2 - b2 * c1)
    return (det > 0) - (det < 0), det


def _pt(rng, scale=10.0):
    return (rng.uniform(-scale, scale), rng.uniform(-scale, scale))


def test_orientation_matches_exact_oracle_on_random_points():
    rng = random.Random(1)
    checked = 0
    for _ in range(3000):
        a, b, c = _pt(rng), _pt(rng), _pt(rng)
        sign, cr = exact_orientation(a, b, c)
        if abs(cr) <= 1e-6:
            continue  # inside the tolerance band; the exact sign is not required
        assert orientation(a, b, c) == sign
        checked += 1
    assert checked >= 1000


def test_incircle_matches_exact_oracle_on_random_points():
    rng = random.Random(2)
    checked = 0
    for _ in range(3000):
        a, b, c, d = (_pt(rng) for _ in range(4))
        if exact_orientation(a, b, c)[0] <= 0:
            a, b = b, a
        if exact_orientation(a, b, c)[1] < 1e-3:
            continue
        sign, det = exact_incircle(a, b, c, d)
        _, cr = exact_orientation(a, b, c)
        if abs(det / cr) <= 1e-5:  # power is within the tolerance band
            continue
        assert in_circumcircle(a, b, c, d) == sign
        checked += 1
    assert checked >= 1000


def test_integer_cocircular_points_are_reported_cocircular():
    # points on x^2 + y^2 = 25
    circle = [(5, 0), (4, 3), (3, 4), (0, 5), (-3, 4), (-4, 3), (-5, 0), (-4, -3), (0, -5), (3, -4)]
    rng = random.Random(3)
    for _ in range(300):
        a, b, c, d = rng.sample(circle, 4)
        if exact_orientation(a, b, c)[0] < 0:
            a, b = b, a
        assert exact_incircle(a, b, c, d)[0] == 0
        assert in_circumcircle(a, b, c, d) == 0


def test_incircle_rejects_degenerate_triangles():
    with pytest.raises(DegenerateTriangle):
        in_circumcircle((0, 0), (1, 0), (2, 0), (0, 1))
    with pytest.raises(DegenerateTriangle):
        in_circumcircle((0, 0), (0, 1), (1, 0), (5, 5))  # clockwise


def test_circle_power_units_are_length_squared():
    a, b, c = (0.0, 0.0), (2.0, 0.0), (0.0, 2.0)  # circle centre (1,1), r^2 = 2
    assert circle_power(a, b, c, (1.0, 1.0)) == pytest.approx(2.0)
    assert circle_power(a, b, c, (3.0, 1.0)) == pytest.approx(2.0 - 4.0)


def test_angle_ccw_values_and_zero_vector():
    assert angle_ccw((1, 0), (0, 1)) == pytest.approx(math.pi / 2)
    assert angle_ccw((0, 1), (1, 0)) == pytest.approx(3 * math.pi / 2)
    assert angle_ccw((1, 0), (2, 0)) == 0.0
    assert angle_ccw((1, 0), (-1, 0)) == pytest.approx(math.pi)
    with pytest.raises(ZeroVector):
        angle_ccw((0, 0), (1, 0))


def test_set_eps_round_trip_and_validation():
    old = numeric.set_eps(1e-6)
    try:
        assert numeric.get_eps() == 1e-6
        assert orientation((0, 0), (1, 0), (0.5, 1e-7)) == 0
    finally:
        numeric.set_eps(old)
    assert orientation((0, 0), (1, 0), (0.5, 1e-7)) == 1
    with pytest.raises(ValueError):
        numeric.set_eps(0.0)


coords = st.floats(min_value=-100, max_value=100, allow_nan=False)
points = st.tuples(coords, coords)


@given(points, points, points)
def test_orientation_is_antisymmetric_and_cyclic(a, b, c):
    o = orientation(a, b, c)
    assert orientation(b, a, c) == -o
    assert orientation(b, c, a) == o


@given(points, points)
def test_angles_are_in_range_and_complementary(u, v):
    if math.hypot(*u) < 1e-3 or math.hypot(*v) < 1e-3:
        return
    a = angle_ccw(u, v)
    b = angle_ccw(v, u)
    assert 0.0 <= a < 2 * math.pi
    if a > 1e-9 and b > 1e-9:
        assert a + b == pytest.approx(2 * math.pi, abs=1e-9)


@given(points, points, st.floats(min_value=-3, max_value=3))
def test_vec2_algebra(p, q, k):
    u, v = Vec2(*p), Vec2(*q)
    assert (u + v) - v == pytest.approx(u, abs=1e-9)
    assert u.cross(v) == pytest.approx(-v.cross(u))
    assert (u * k).length() == pytest.approx(abs(k) * u.length(), abs=1e-9)
    w = u.rotate(math.pi / 2)
    assert w.dot(u) == pytest.approx(0.0, abs=1e-7)
    assert 0.0 <= u.angle() < 2 * math.pi
