import random

import pytest
from hypothesis import HealthCheck, settings

from planar3ecp import generators as G
from planar3ecp.graph import RequirementMap

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def reqs(n, mapping):
    r = [0] * n
    for v, x in mapping.items():
        r[v] = x
    return RequirementMap(tuple(r))


def corners(rows, cols, value=3):
    n = rows * cols
    return reqs(n, {0: value, cols - 1: value, n - cols: value, n - 1: value})


def random_instance(seed, n_range=(4, 9), keep=0.7, max_weight=4, terminals=(2, 4), max_req=3):
    rng = random.Random(seed)
    n = rng.randint(*n_range)
    g = G.random_planar_graph(n, rng, keep=keep, max_weight=max_weight)
    r = G.random_requirements(n, rng, rng.randint(*terminals), max_req)
    return g, r


@pytest.fixture
def rng():
    return random.Random(1234)
