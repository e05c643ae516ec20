import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from planar3ecp import generators as G
from planar3ecp.connectivity import (
    InfeasibleError,
    brute_force_min_cut,
    edge_connectivity,
    exhaustive_path_packing,
    is_feasible,
    is_minimal,
    is_vertex_feasible,
    is_vertex_minimal,
    minimalize,
    minimalize_vertex,
    violated_pair,
    vertex_connectivity,
)
from planar3ecp.graph import MultiSolution

from conftest import random_instance, reqs


def test_triangle_connectivity():
    g = G.triangle()
    assert edge_connectivity(g, [1, 1, 1], 0, 1) == 2
    assert edge_connectivity(g, [3, 0, 0], 0, 1) == 3
    assert vertex_connectivity(g, 0, 1) == 2


def test_limit_caps_flow():
    g = G.triangle()
    assert edge_connectivity(g, [3, 3, 3], 0, 1, limit=2) == 2


def test_self_pair_rejected():
    with pytest.raises(ValueError):
        edge_connectivity(G.triangle(), [1, 1, 1], 1, 1)


def test_feasibility_and_violated_pair():
    g = G.path(3)
    r = reqs(3, {0: 2, 2: 2})
    assert not is_feasible(g, [1, 1], r)
    assert violated_pair(g, [1, 1], r) == (0, 2, 2, 1)
    assert is_feasible(g, [2, 2], r)
    assert violated_pair(g, [2, 2], r) is None


def test_minimalize_triangle_is_minimal_not_optimal():
    g = G.triangle()
    r = reqs(3, {0: 3, 1: 3, 2: 3})
    sol = minimalize(g, MultiSolution.from_vector([3, 3, 3]), r)
    # greedy removal empties edge 0 first; the optimum 5 is not reached
    assert sol.weight(g) == 6
    assert is_minimal(g, sol, r)


def test_minimalize_needs_feasible_input():
    g = G.path(3)
    with pytest.raises(InfeasibleError):
        minimalize(g, MultiSolution.from_vector([1, 0]), reqs(3, {0: 1, 2: 1}))


def test_vertex_mode_k4():
    g = G.k4()
    r = reqs(4, {0: 3, 1: 3, 2: 3, 3: 3})
    assert is_vertex_feasible(g, range(6), r)
    assert is_vertex_minimal(g, range(6), r)
    assert minimalize_vertex(g, range(6), r) == list(range(6))


def test_vertex_connectivity_counts_direct_copies():
    g = G.path(2)
    assert vertex_connectivity(g, 0, 1, [3]) == 3


@given(st.integers(0, 10_000))
def test_menger_on_random_multigraphs(seed):
    g, _ = random_instance(seed, n_range=(2, 8))
    rng = random.Random(seed)
    vec = [rng.randint(0, 3) for _ in range(g.m)]
    u, v = rng.sample(range(g.n), 2)
    lam = edge_connectivity(g, vec, u, v)
    assert lam == brute_force_min_cut(g, vec, u, v)


@given(st.integers(0, 10_000))
def test_minimalize_yields_minimal(seed):
    g, r = random_instance(seed)
    full = MultiSolution.from_vector([3] * g.m)
    if not is_feasible(g, full, r):
        return
    sol = minimalize(g, full, r)
    assert is_feasible(g, sol, r)
    assert is_minimal(g, sol, r)


@given(st.integers(0, 10_000))
def test_feasibility_is_monotone(seed):
    g, r = random_instance(seed)
    rng = random.Random(seed)
    vec = [rng.randint(0, 3) for _ in range(g.m)]
    if is_feasible(g, vec, r):
        more = [min(3, x + rng.randint(0, 1)) for x in vec]
        assert is_feasible(g, more, r)


def test_exhaustive_path_packing_small():
    g = G.theta((2, 2, 2))
    assert exhaustive_path_packing(g, [1] * g.m, 0, 1) == 3
    assert exhaustive_path_packing(g, [1] * g.m, 0, 2) == 2
