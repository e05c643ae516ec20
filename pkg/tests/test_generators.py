import random

from hypothesis import given
from hypothesis import strategies as st

from planar3ecp import generators as G


def test_fixture_sizes():
    assert (G.grid(3, 4).n, G.grid(3, 4).m) == (12, 17)
    assert (G.wheel(5).n, G.wheel(5).m) == (6, 10)
    assert (G.star(4).n, G.star(4).m) == (5, 4)
    assert (G.octahedron().n, G.octahedron().m) == (6, 12)
    assert G.theta((1, 2, 3)).m == 6


def test_triangulation_edge_count():
    for n in range(3, 15):
        rot = G.random_triangulation(n, random.Random(n))
        g = G.from_neighbor_rotations(rot)
        assert g.m == 3 * n - 6 and len(g.faces()) == 2 * n - 4


def test_requirements_generator():
    r = G.random_requirements(10, random.Random(0), 4, max_req=2)
    assert len(r.terminals) == 4 and max(r) <= 2


@given(st.integers(0, 10_000), st.floats(0.2, 1.0))
def test_random_planar_graph_connected(seed, keep):
    g = G.random_planar_graph(8, random.Random(seed), keep=keep, max_weight=5)
    assert g.is_connected()
    assert all(1 <= w <= 5 for w in g.weights)
