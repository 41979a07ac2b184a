"""Local search for large systolic ratio inside a stratum.

A surface is moved through period coordinates: the vectors of the edges
outside a spanning tree of the dual graph.  The remaining edge vectors follow
from triangle closure, so the cone angles (hence the stratum) never change
while all triangles stay positively oriented.
"""

from __future__ import annotations

import csv
import math
from collections import deque
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .delaunay import delaunay_flip
from .errors import DegenerationUnavoidable
from .numeric import Vec2
from .surface import Triangulation
from .systole import closed_geodesic_lengths, compute_systole, count_classes

MAX_TRIES = 100


class PeriodCoordinates:
    """Free edge vectors of a fixed triangulation combinatorics."""

    def __init__(self, T: Triangulation):
        self.T = T
        n_tri = T.num_triangles
        parent = {0: None}
        order = [0]
        queue = deque([0])
        tree = set()
        while queue:
            t = queue.popleft()
            for h in range(3 * t, 3 * t + 3):
                u = T.opp[h] // 3
                if u not in parent:
                    parent[u] = T.opp[h]  # half-edge of u glued to its parent
                    tree.add(min(h, T.opp[h]))
                    order.append(u)
                    queue.append(u)
        if len(order) != n_tri:
            raise ValueError("dual graph is not connected")
        self.parent = parent
        self.order = order
        self.free = [e for e in T.edges() if e not in tree]

    @property
    def dimension(self) -> int:
        return 2 * len(self.free)

    def values(self, T: Optional[Triangulation] = None) -> np.ndarray:
        T = T or self.T
        return np.array([c for e in self.free for c in T.vec[e]], dtype=float)

    def rebuild(self, x: Sequence[float]) -> Optional[Triangulation]:
        """Triangulation with free vectors ``x``; None if a triangle is not
        positively oriented."""
        T = self.T
        vec: List[Optional[Vec2]] = [None] * T.num_half_edges
        for k, e in enumerate(self.free):
            v = Vec2(float(x[2 * k]), float(x[2 * k + 1]))
            vec[e] = v
            vec[T.opp[e]] = -v
        for t in reversed(self.order[1:]):
            h = self.parent[t]
            acc = Vec2(0.0, 0.0)
            for w in range(3 * t, 3 * t + 3):
                if w != h:
                    acc = acc + vec[w]
            vec[h] = -acc
            vec[T.opp[h]] = acc
        for t in range(T.num_triangles):
            a, b = vec[3 * t], vec[3 * t + 1]
            if a.cross(b) <= 1e-12 * max(1.0, a.length() * b.length()):
                return None
        return Triangulation(vec, list(T.opp), name=T.name, check=False)


def normalize_area(T: Triangulation, area: float = 1.0) -> Triangulation:
    return T.scaled(math.sqrt(area / T.area()))


def _disk(rng: np.random.Generator, delta: float) -> Tuple[float, float]:
    r = delta * math.sqrt(rng.random())
    a = 2 * math.pi * rng.random()
    return r * math.cos(a), r * math.sin(a)


def perturb(T: Triangulation, delta: float, seed: int = 0) -> Triangulation:
    """Move every free edge vector by a uniform random vector of norm at most
    ``delta`` (resampling degenerate draws) and restore the Delaunay
    property."""
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if delta == 0:
        return delaunay_flip(T)
    pc = PeriodCoordinates(T)
    x0 = pc.values()
    rng = np.random.default_rng(seed)
    for _ in range(MAX_TRIES):
        x = x0.copy()
        for k in range(len(pc.free)):
            dx, dy = _disk(rng, delta)
            x[2 * k] += dx
            x[2 * k + 1] += dy
        S = pc.rebuild(x)
        if S is not None:
            return delaunay_flip(S)
    raise DegenerationUnavoidable(f"no non-degenerate perturbation in {MAX_TRIES} tries")


@dataclass
class TraceRow:
    step: int
    ratio: float
    systole: float
    class_count: int


@dataclass
class OptimizeResult:
    surface: Triangulation
    ratio: float
    trace: List[TraceRow] = field(default_factory=list)
    start_ratio: float = 0.0
    evaluations: int = 0

    def write_trace(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["step", "ratio", "systole", "class_count"])
            for r in self.trace:
                w.writerow([r.step, repr(r.ratio), repr(r.systole), r.class_count])


def _random_basis(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return (q * np.sign(np.diag(r))).T


def _soft_min(values: Sequence[float], tau: float) -> float:
    m = min(values)
    return m - tau * math.log(sum(math.exp(-(v - m) / tau) for v in values))


def maximize_ratio(T0: Triangulation, steps: int = 2000, seed: int = 0,
                   delta: float = 0.02, restarts: int = 3, min_step: float = 1e-7,
                   track_classes: bool = True, smoothing: float = 1.0) -> OptimizeResult:
    """Pattern search on the systolic ratio over period coordinates.

    Each objective evaluation is one step.  A poll tries the last successful
    direction and then +-step along an orthonormal basis (coordinate axes
    first, a fresh random basis after every failed poll), moving to the first
    improvement.  Success doubles the step (up to ``delta``), failure halves
    it; below ``min_step`` the search restarts with the initial step, at most
    ``restarts`` times.  Every accepted point is rescaled to unit area.  The
    coordinate chart is rebuilt on the Delaunay triangulation whenever a
    trial point would degenerate a triangle.

    The systolic ratio is a minimum over curves and has kinks wherever
    several systoles tie; polls that must improve it exactly stall on such
    ridges.  With ``smoothing > 0`` the poll compares a soft minimum of the
    unit-area lengths of all closed geodesics near the systole, at
    temperature ``smoothing * step``, so it tracks the ridge and sharpens as
    the step shrinks.  The true ratio is evaluated at every step and the best
    surface seen is returned.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    rng = np.random.default_rng(seed)
    cur = normalize_area(delaunay_flip(T0))

    def measure(T, step):
        r = compute_systole(T)
        unit = math.sqrt(T.area())
        f = (r.systole / unit) ** 2
        if smoothing <= 0:
            return r, f, f
        tau = smoothing * step
        window = 12 * tau * unit
        lengths = closed_geodesic_lengths(r.triangulation, r.systole + window)
        s = _soft_min([l / unit for l in lengths], tau)
        return r, f, s

    step = delta
    res, f_cur, s_cur = measure(cur, step)
    start = f_cur
    best, f_best, sys_best = cur, f_cur, res.systole

    def classes(T):
        return count_classes(T) if track_classes else -1

    n_cls = classes(best)
    trace: List[TraceRow] = []
    used = 0
    pc = PeriodCoordinates(cur)
    x = pc.values()
    dim = pc.dimension
    basis = np.eye(dim)
    last: Optional[np.ndarray] = None
    restarts_left = restarts
    while used < steps:
        dirs = ([last] if last is not None else []) + [sgn * b for b in basis for sgn in (1.0, -1.0)]
        moved = False
        rebase = False
        for d in dirs:
            if used >= steps:
                break
            cand = pc.rebuild(x + step * d)
            used += 1
            if cand is None:
                rebase = True
            else:
                r, f, s = measure(cand, step)
                k = 1.0 / math.sqrt(cand.area())
                if f > f_best * (1 + 1e-12):
                    best, f_best, sys_best = cand.scaled(k), f, r.systole * k
                    n_cls = classes(best)
                if s > s_cur + 1e-15:
                    x = (x + step * d) * k
                    cur = cand.scaled(k)
                    s_cur = s
                    moved = True
            trace.append(TraceRow(used, f_best, sys_best, n_cls))
            if moved:
                last = d
                break
        if rebase:
            cur = delaunay_flip(cur)
            pc = PeriodCoordinates(cur)
            x = pc.values()
            last = None
        if moved:
            step = min(2 * step, delta)
            continue
        last = None
        basis = _random_basis(rng, dim)
        step *= 0.5
        if step < min_step:
            if restarts_left == 0:
                break
            restarts_left -= 1
            step = delta
        if smoothing > 0 and used < steps:
            # the temperature changed with the step: re-evaluate the centre
            _, _, s_cur = measure(cur, step)
            used += 1
            trace.append(TraceRow(used, f_best, sys_best, n_cls))
    return OptimizeResult(best, f_best, trace, start, used)
