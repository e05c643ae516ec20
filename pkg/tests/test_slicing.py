from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from planar3ecp import generators as G
from planar3ecp.branch.decomposition import decompose
from planar3ecp.connectivity import InfeasibleError, is_feasible
from planar3ecp.slicing import (
    Slice,
    SlicingError,
    _cut_weight,
    assign_artificial_terminals,
    dual_levels,
    is_tree,
    recombine,
    slice_graph,
    slice_requirements,
)

from conftest import random_instance, reqs


def test_cycle_single_slice():
    g = G.cycle(6)
    res = slice_graph(g, 2)
    assert len(res.slices) == 1
    assert res.slices[0].edges == frozenset(range(g.m))


def test_shallow_graph_single_slice():
    res = slice_graph(G.triangle(), 3)
    assert len(res.slices) == 1 and not res.slices[0].boundary


def test_eta_must_be_two_or_more():
    with pytest.raises(ValueError):
        slice_graph(G.grid(3, 3), 1)


def test_grid6_slices():
    g = G.grid(6, 6)
    res = slice_graph(g, 2)
    assert len(res.slices) >= 2
    st_ = res.stats
    assert st_["covered"] and st_["max_owners"] <= 2 and st_["shared_equals_boundary"]
    for s in res.slices:
        if s.parent is not None:
            assert len(s.boundary_cycles) == 1
            cyc = s.boundary_cycles[0]
            assert cyc[0] == cyc[-1]
        if s.edges:
            assert decompose(g.subgraph(sorted(s.edges))).width <= 2 * 2 + 2


def test_offset_minimises_boundary_weight():
    g = G.grid(7, 7)
    res = slice_graph(g, 3)
    level, _ = dual_levels(g)
    maxl = max(level)
    weights = []
    for o in range(3):
        cuts = {l for l in range(1, maxl + 1) if (l - o) % 3 == 0}
        weights.append(Fraction(_cut_weight(g, level, cuts), g.scale))
    assert res.boundary_weight == min(weights)
    assert res.offset_weights == weights


def test_artificial_terminals_r1_and_r3():
    g = G.grid(6, 6)
    res = slice_graph(g, 2)
    inner = next(s for s in res.slices if s.parent is not None)
    v_in = min(inner.vertices(g) - {x for e in inner.boundary for x in (g.eu[e], g.ev[e])})
    for value in (1, 3):
        r = reqs(36, {0: value, v_in: value})
        slices = assign_artificial_terminals(g, res.slices, r)
        assert list(inner.artificial_terminals.values()) == [value]
        assert slices[inner.parent].artificial_terminals == inner.artificial_terminals


def test_no_artificial_terminals_when_one_side_is_empty():
    g = G.grid(6, 6)
    res = slice_graph(g, 2)
    assign_artificial_terminals(g, res.slices, reqs(36, {0: 3, 1: 3}))
    assert all(not s.artificial_terminals for s in res.slices)


def test_non_tree_rejected():
    a = Slice(0, frozenset([0]), parent=1)
    b = Slice(1, frozenset([1]), parent=0)
    assert not is_tree([a, b])
    with pytest.raises(SlicingError):
        assign_artificial_terminals(G.path(3), [a, b], reqs(3, {}))


def test_recombine_single_slice_identity():
    g = G.cycle(4)
    r = reqs(4, {0: 2, 2: 2})
    sol, rule = recombine(g, [{0: 1, 1: 1, 2: 1, 3: 1}], r)
    assert rule == "max" and sol.mult == {0: 1, 1: 1, 2: 1, 3: 1}


def test_recombine_escalates_to_sum():
    g = G.path(2)
    r = reqs(2, {0: 2, 1: 2})
    sol, rule = recombine(g, [{0: 1}, {0: 1}], r)
    assert rule == "sum" and sol.mult == {0: 2}


def test_recombine_reports_violated_pair():
    g = G.path(3)
    with pytest.raises(InfeasibleError, match="between 0 and 2"):
        recombine(g, [{0: 1}], reqs(3, {0: 1, 2: 1}))


@given(st.integers(0, 10_000), st.integers(2, 4))
def test_slices_form_a_tree_and_cover(seed, eta):
    g, r = random_instance(seed, n_range=(6, 16), keep=0.8)
    res = slice_graph(g, eta)
    assert is_tree(res.slices)
    assert res.stats["covered"] and res.stats["max_owners"] <= 2
    assert res.stats["shared_equals_boundary"]
    assign_artificial_terminals(g, res.slices, r)
    for s in res.slices:
        req = slice_requirements(g, s, r)
        assert all(req[v] >= r[v] for v in s.vertices(g))
