from itertools import product

from planar3ecp.branch.characteristic import (
    Configuration,
    alg_demands,
    bset,
    combine,
    completion,
    leaf_characteristics,
    leaf_sets,
)


def test_alg_demands_basics():
    assert alg_demands([], [])
    assert not alg_demands([(0, 1)], [(0, 1, 2)])
    assert alg_demands([(0, 1), (0, 1)], [(0, 1, 2)])
    k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    assert alg_demands(k4, [(0, 1, 2), (2, 3, 1)])
    assert alg_demands(k4, [(0, 1, 3), (2, 3, 1)])
    assert not alg_demands(k4, [(0, 1, 3), (2, 3, 2)])


def test_alg_demands_respects_shared_capacity():
    # two demands through a single bridge
    edges = [(0, 2), (1, 2), (2, 3), (3, 4), (3, 5)]
    assert alg_demands(edges, [(0, 4, 1)])
    assert not alg_demands(edges, [(0, 4, 1), (1, 5, 1)])


def test_completion_normalises():
    assert completion([(2, 1, 1), (1, 2, 2), (3, 4, 0)]) == ((1, 2, 3),)
    assert bset([(1, 0, 1)]) == frozenset([(0, 1, 1)])


def test_leaf_characteristics_counts():
    chars = leaf_characteristics(0, 1, [3, 3], 3)
    # 2 completions (2 or 3 copies) x 2 configs for each endpoint
    assert len(chars) == 2 * 2 * 2
    assert len(leaf_characteristics(0, 1, [0, 0], 3)) == 1


def test_combine_two_edge_path():
    r = {0: 1, 1: 0, 2: 1}
    a = leaf_characteristics(0, 1, r, 3)
    b = leaf_characteristics(1, 2, r, 3)
    out = set()
    for (c1, _), (c2, _) in product(a, b):
        out |= combine(c1, c2, (0, 1), (1, 2), (0, 2), 3)
    assert len(out) == 16
    assert any(() in ch.C for ch in out)


def test_combine_parallel_edges_needs_no_completion():
    r = {0: 2, 1: 2}
    a = leaf_characteristics(0, 1, r, 3)
    out = set()
    for (c1, _), (c2, _) in product(a, a):
        out |= combine(c1, c2, (0, 1), (0, 1), (), 3)
    assert any(() in ch.C for ch in out)
    assert Configuration((3, 0), bset([(0, 1, 1)]), 2) in leaf_sets(0, 1, r, 3).path_configs[0]
