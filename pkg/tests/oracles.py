"""Independent reference computations used by the tests.

None of these share code with the package beyond reading the raw half-edge
arrays of a triangulation.
"""

import math
from collections import deque


def circumcircle(a, b, c):
    """Centre and radius of the circle through three plane points (tuples)."""
    ax, ay = a
    bx, by = b
    cx, cy = c
    d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d
    uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d
    return (ux, uy), math.hypot(ax - ux, ay - uy)


def _seg_dist(p, a, b):
    ax, ay = a
    dx, dy = b[0] - ax, b[1] - ay
    L2 = dx * dx + dy * dy
    t = max(0.0, min(1.0, ((p[0] - ax) * dx + (p[1] - ay) * dy) / L2))
    return math.hypot(ax + t * dx - p[0], ay + t * dy - p[1])


def _tri(T, t, origin):
    """Developed corners of triangle t with its slot-0 corner at ``origin``."""
    pts = [origin]
    for k in range(2):
        v = T.vec[3 * t + k]
        pts.append((pts[-1][0] + v[0], pts[-1][1] + v[1]))
    return pts


def empty_circumdisk_violations(T, rel_tol=1e-9, max_copies=20000):
    """For every triangle, unfold the surface across every edge that enters
    the open circumdisk and report triangles whose disk contains a vertex.

    Returns a list of (triangle, distance / radius) pairs.
    """
    bad = []
    for t0 in range(T.num_triangles):
        pts0 = _tri(T, t0, (0.0, 0.0))
        c, R = circumcircle(*pts0)
        tol = rel_tol * R
        seen = set()
        queue = deque([(t0, (0.0, 0.0))])
        worst = None
        while queue:
            t, o = queue.popleft()
            key = (t, round(o[0], 7), round(o[1], 7))
            if key in seen:
                continue
            seen.add(key)
            if len(seen) > max_copies:
                raise RuntimeError("circumdisk unfolding did not terminate")
            pts = _tri(T, t, o)
            for p in pts:
                d = math.hypot(p[0] - c[0], p[1] - c[1])
                if d < R - tol:
                    worst = d / R if worst is None else min(worst, d / R)
            for k in range(3):
                a, b = pts[k], pts[(k + 1) % 3]
                if _seg_dist(c, a, b) >= R - tol:
                    continue
                h = 3 * t + k
                g = T.opp[h]
                u = g // 3
                # g runs b -> a inside triangle u
                start = (0.0, 0.0)
                for j in range(3 * u, g):
                    start = (start[0] + T.vec[j][0], start[1] + T.vec[j][1])
                queue.append((u, (b[0] - start[0], b[1] - start[1])))
        if worst is not None:
            bad.append((t0, worst))
    return bad


def lattice_vectors(u, v, L):
    """Primitive vectors m*u + n*v of length at most L, exactly enumerated."""
    out = set()
    # |m u + n v| >= |m| * |u x v| / |v|, and symmetrically for n
    cross = abs(u[0] * v[1] - u[1] * v[0])
    M = int(L * math.hypot(*v) / cross) + 1
    N = int(L * math.hypot(*u) / cross) + 1
    for m in range(-M, M + 1):
        for n in range(-N, N + 1):
            if (m, n) == (0, 0) or math.gcd(m, n) != 1:
                continue
            x = m * u[0] + n * v[0]
            y = m * u[1] + n * v[1]
            if math.hypot(x, y) <= L:
                out.add((round(x, 6) + 0.0, round(y, 6) + 0.0))
    return out



def shortest_lattice_length(u, v, L):
    """Length of the shortest nonzero vector m*u + n*v (assumed at most L)."""
    cross = abs(u[0] * v[1] - u[1] * v[0])
    M = int(L * math.hypot(*v) / cross) + 1
    N = int(L * math.hypot(*u) / cross) + 1
    return min(
        math.hypot(m * u[0] + n * v[0], m * u[1] + n * v[1])
        for m in range(-M, M + 1)
        for n in range(-N, N + 1)
        if (m, n) != (0, 0)
    )
