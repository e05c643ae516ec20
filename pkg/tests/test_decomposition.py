import pytest
from hypothesis import given
from hypothesis import strategies as st

from planar3ecp import generators as G
from planar3ecp.branch.decomposition import WidthExceeded, decompose

from conftest import random_instance


def test_single_edge():
    bd = decompose(G.path(2))
    bd.validate()
    assert bd.width == 0


def test_path_widths():
    # an inner edge of a path separates both of its endpoints
    assert decompose(G.path(3)).width == 1
    bd = decompose(G.path(6))
    bd.validate()
    assert bd.width == 2


def test_cycle_width_two():
    bd = decompose(G.cycle(7))
    bd.validate()
    assert bd.width == 2


def test_grid_width_bounded_by_side():
    bd = decompose(G.grid(4, 4))
    bd.validate()
    assert bd.width <= 5


def test_width_cap():
    with pytest.raises(WidthExceeded):
        decompose(G.grid(4, 4), width_cap=2)


def test_empty_graph_rejected():
    with pytest.raises(ValueError):
        decompose(G.path(1))


def test_deterministic():
    a = decompose(G.grid(3, 4), seed=3)
    b = decompose(G.grid(3, 4), seed=3)
    assert [(n.children, n.edge, n.separator) for n in a.nodes] == [
        (n.children, n.edge, n.separator) for n in b.nodes
    ]


@given(st.integers(0, 10_000))
def test_random_decompositions_validate(seed):
    g, _ = random_instance(seed, n_range=(2, 12))
    bd = decompose(g, seed=seed)
    bd.validate()
    assert len(bd.leaves()) == g.m
    assert bd.nodes[bd.root].separator == ()
