import math
import random

import pytest
from hypothesis import HealthCheck, settings

from flatsys.errors import DegenerationUnavoidable
from flatsys.surface import commutator, cycle_type, from_permutations

settings.register_profile(
    "flatsys", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("flatsys")


def _transitive(sigma, tau):
    n = len(sigma)
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in (sigma[i], tau[i]):
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == n


def random_cell(rng):
    u = (rng.uniform(0.6, 1.4), 0.0)
    v = (rng.uniform(-0.5, 0.5), rng.uniform(0.6, 1.4))
    return u, v


def random_pair(rng, n, ctype):
    """Random transitive permutation pair whose commutator has cycle type
    ``ctype`` (a sorted list of cycle lengths covering all n cells)."""
    while True:
        sigma = list(range(n))
        tau = list(range(n))
        rng.shuffle(sigma)
        rng.shuffle(tau)
        if _transitive(sigma, tau) and sorted(cycle_type(commutator(sigma, tau))) == sorted(ctype):
            return sigma, tau


# zero orders -> (cells, commutator cycle type); fixed-point-free commutators
# mean no marked points
STRATA = {
    (2,): (3, [3]),
    (1, 1): (4, [2, 2]),
    (4,): (5, [5]),
    (6,): (7, [7]),
}


def random_surface(seed, stratum, perturb_size=0.15):
    """A random surface in the given stratum: a random square-tiled pattern
    with a random parallelogram cell, then moved off the lattice in period
    coordinates."""
    from flatsys.optimize import perturb

    rng = random.Random(seed)
    n, ctype = STRATA[tuple(stratum)]
    sigma, tau = random_pair(rng, n, ctype)
    u, v = random_cell(rng)
    T = from_permutations(sigma, tau, u, v, name=f"random-{'-'.join(map(str, stratum))}-{seed}")
    if perturb_size:
        h = min(T.vec[k].length() for k in range(T.num_half_edges))
        for k in range(5):
            try:
                return perturb(T, perturb_size * h / (k + 1), seed)
            except DegenerationUnavoidable:
                continue
    return T


def random_torus(seed):
    rng = random.Random(seed)
    u = (rng.uniform(0.5, 1.5), rng.uniform(-0.3, 0.3))
    v = (rng.uniform(-0.6, 0.6), rng.uniform(0.5, 1.5))
    return u, v, from_permutations([0], [0], u, v, name=f"torus-{seed}")


@pytest.fixture(scope="session")
def x10():
    from flatsys import catalog

    return catalog("x10")
