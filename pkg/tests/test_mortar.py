from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from planar3ecp import generators as G
from planar3ecp.mortar import (
    THETA_CAP,
    brick_report,
    build_mortar,
    check_brick,
    default_theta,
    designate_portals,
    extract_bricks,
    interior_partition_ok,
    is_zero_short,
    portal_gaps,
    short_violations,
)
from planar3ecp.steiner import all_pairs_distances

from conftest import corners, random_instance, reqs


def test_default_theta():
    assert default_theta(Fraction(1, 2)) == 8
    assert default_theta(Fraction(1, 4)) == THETA_CAP


def test_bad_epsilon():
    with pytest.raises(ValueError):
        build_mortar(G.triangle(), reqs(3, {0: 1, 1: 1}), 0)
    with pytest.raises(ValueError):
        build_mortar(G.triangle(), reqs(3, {0: 1, 1: 1}), 1)


def test_single_terminal_has_empty_mortar():
    mg = build_mortar(G.grid(3, 3), reqs(9, {4: 3}), Fraction(1, 2))
    assert not mg.edges
    assert extract_bricks(G.grid(3, 3), mg) == []


def test_cycle_with_opposite_terminals():
    g = G.cycle(6)
    mg = build_mortar(g, reqs(6, {0: 1, 3: 1}), Fraction(1, 2))
    # the Steiner path is already short against the in-disk distances
    assert mg.weight == 3
    bricks = extract_bricks(g, mg)
    assert len(bricks) == 1
    assert len(bricks[0].interior) == 3


def test_grid_corners_mortar():
    g = G.grid(4, 4)
    eps = Fraction(1, 2)
    mg = build_mortar(g, corners(4, 4), eps)
    assert mg.weight_bound_ratio <= mg.bound_constant
    bricks = extract_bricks(g, mg)
    assert interior_partition_ok(g, mg.edges, bricks)


def test_portals_on_long_boundary():
    g = G.cycle(12)
    mg = build_mortar(g, reqs(12, {0: 1, 6: 1}), Fraction(1, 2))
    brick = extract_bricks(g, mg)[0]
    designate_portals(g, brick, 3)
    assert len(brick.portals) <= 3
    assert max(portal_gaps(g, brick)) <= brick.boundary_weight(g) / 3
    with pytest.raises(ValueError):
        designate_portals(g, brick, 0)


def test_zero_short_path():
    g = G.path(4)
    dist = all_pairs_distances(g)
    assert is_zero_short(g, [0, 2, 4], dist)
    assert short_violations(g, [0, 2, 4], dist, Fraction(1, 2)) == []


def test_brick_report_is_plain_json():
    g = G.grid(3, 3)
    mg = build_mortar(g, corners(3, 3), Fraction(1, 2))
    bricks = extract_bricks(g, mg)
    for b in bricks:
        designate_portals(g, b, 4)
    rep = brick_report(g, mg, bricks, corners(3, 3), 4)
    assert rep["interior_partition"] is True
    assert all(b["north_zero_short"] for b in rep["bricks"])


@given(st.integers(0, 10_000), st.sampled_from([Fraction(1, 2), Fraction(1, 4)]))
def test_mortar_contracts_on_random_graphs(seed, eps):
    g, r = random_instance(seed, n_range=(4, 12), keep=0.8, terminals=(2, 5))
    mg = build_mortar(g, r, eps)
    if not mg.edges:
        return
    # spans the terminals
    touched = {g.eu[e] for e in mg.edges} | {g.ev[e] for e in mg.edges}
    assert set(r.terminals) <= touched
    dist = all_pairs_distances(g)
    bricks = extract_bricks(g, mg, dist)
    assert interior_partition_ok(g, mg.edges, bricks)
    theta = default_theta(eps)
    for b in bricks:
        designate_portals(g, b, theta)
        chk = check_brick(g, b, r, eps, theta, dist)
        assert chk.north_zero_short
        assert chk.max_portal_gap <= chk.gap_bound
        assert chk.portal_count <= theta
