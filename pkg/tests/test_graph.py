from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from planar3ecp import generators as G
from planar3ecp.graph import (
    EmbeddedMultigraph,
    EmbeddingError,
    MultiSolution,
    RequirementMap,
    as_requirements,
    augment_parallel,
    build,
    enclosed_subgraph,
    face_regions,
)

from conftest import random_instance


def euler_ok(g):
    comps = len({c for v, c in enumerate(g.component_labels()) if g.degree(v)})
    used = sum(1 for v in range(g.n) if g.degree(v))
    return used - g.m + len(g.faces()) == 2 * comps


def test_triangle_faces():
    g = G.triangle()
    assert g.n == 3 and g.m == 3
    assert len(g.faces()) == 2
    assert euler_ok(g)


def test_grid_face_count():
    g = G.grid(3, 4)
    assert g.m == 17
    assert len(g.faces()) == 2 + g.m - g.n


def test_face_permutation_uses_twin():
    g = G.k4()
    for d in range(2 * g.m):
        assert g.face_next(d) == g.next_at_vertex(d ^ 1)


def test_dual_of_cycle_has_two_vertices():
    d = G.cycle(6).dual()
    assert d.n == 2 and d.m == 6


def test_bad_rotation_rejected():
    with pytest.raises(EmbeddingError):
        build(3, [(0, 1), (1, 2)], [[0], [0, 1], [0]])


def test_nonplanar_rotation_rejected():
    # K4 with one rotation reversed has the wrong face count
    g = G.k4()
    rot = [list(r) for r in g.rotation]
    rot[0] = rot[0][::-1]
    rot[1] = [rot[1][0], rot[1][2], rot[1][1]]
    with pytest.raises(EmbeddingError):
        EmbeddedMultigraph(g.n, list(zip(g.eu, g.ev)), rot)


def test_fraction_weights_scale():
    g = G.path(3, weights=[Fraction(1, 2), Fraction(1, 3)])
    assert g.scale == 6
    assert g.iw == (3, 2)
    assert g.total_weight() == Fraction(5, 6)


def test_subgraph_keeps_parent_ids():
    g = G.grid(3, 3)
    h = g.subgraph([1, 5, 7])
    assert h.m == 3 and h.n == g.n
    assert h.parent_edge == (1, 5, 7)
    assert h.local_edges([7, 2, 1]) == [2, 0]
    hh = h.subgraph([2])
    assert hh.parent_edge == (7,)


def test_requirements_validation():
    r = as_requirements({0: 3, 2: 1}, 4)
    assert list(r) == [3, 0, 1, 0]
    assert r.terminals == [0, 2]
    with pytest.raises(ValueError):
        RequirementMap((4, 0))


def test_multisolution_bounds():
    s = MultiSolution({0: 2, 3: 0}, 3)
    assert s.mult == {0: 2}
    with pytest.raises(ValueError):
        MultiSolution({0: 4}, 3)
    assert MultiSolution.from_vector([0, 1, 3]).mult == {1: 1, 2: 3}


def test_augment_parallel():
    g = G.triangle()
    h = augment_parallel(g, 3)
    assert h.m == 9
    assert euler_ok(h)


def test_face_regions_of_wheel_rim():
    g = G.wheel(5)
    rim = [e for e in range(g.m) if 0 not in (g.eu[e], g.ev[e])]
    regions = face_regions(g, rim)
    sizes = sorted(len(x) for x in regions.interior)
    assert sizes == [0, 5]
    inner = next(f for f, x in zip(regions.faces, regions.interior) if x)
    sub = enclosed_subgraph(g, rim, inner)
    assert sub.m == g.m


@given(st.integers(0, 10_000))
def test_random_graphs_satisfy_euler(seed):
    g, _ = random_instance(seed, n_range=(3, 12))
    assert euler_ok(g)
    assert g.is_connected()
    # the dual of the dual has as many vertices as g has non-isolated vertices
    assert g.dual().m == g.m


@given(st.integers(0, 10_000))
def test_subgraph_face_darts_are_a_permutation(seed):
    g, _ = random_instance(seed, n_range=(3, 10))
    keep = [e for e in range(g.m) if (e * 7 + seed) % 3]
    h = g.subgraph(keep)
    darts = sorted(d for f in h.faces() for d in f)
    assert darts == list(range(2 * h.m))
