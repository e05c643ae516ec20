from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from planar3ecp import generators as G
from planar3ecp.oracle import exact_solve
from planar3ecp.spanner import brick_trees, spanner_for
from planar3ecp.steiner import is_steiner_tree

from conftest import corners, random_instance, reqs


def test_wheel_brick_trees_use_the_hub():
    g = G.wheel(6)
    r = reqs(g.n, {1: 2, 4: 2})
    mg, bricks, sp = spanner_for(g, r, Fraction(1, 2))
    assert sp.mortar <= sp.edges
    for (bid, mask), es in sp.trees.items():
        brick = bricks[bid]
        verts = [g.tail(brick.boundary[p]) for i, p in enumerate(brick.portal_positions) if mask >> i & 1]
        assert is_steiner_tree(g, list(es), verts)


def test_stats_fields():
    g = G.grid(4, 4)
    _, _, sp = spanner_for(g, corners(4, 4), Fraction(1, 2))
    for key in ("spanner_weight", "mortar_weight", "ratio", "trees", "distinct_trees", "bricks_thinned", "theta"):
        assert key in sp.stats
    assert sp.stats["spanner_weight"] >= sp.stats["mortar_weight"]


def test_budget_thins_portals():
    g = G.wheel(8)
    r = reqs(g.n, {1: 1, 5: 1})
    mg, bricks, sp = spanner_for(g, r, Fraction(1, 2), theta=8)
    b = max(bricks, key=lambda b: len(b.interior))
    trees, used = brick_trees(g, mg.edges, b, budget=64)
    assert len(used) < len(b.portal_positions)


@given(st.integers(0, 10_000))
def test_spanner_preserves_feasibility(seed):
    g, r = random_instance(seed, n_range=(4, 7), keep=0.7)
    if len(r.terminals) < 2:
        return
    _, _, sp = spanner_for(g, r, Fraction(1, 2))
    sg = sp.graph(g)
    full = exact_solve(g, r, max_slots=None, budget=200_000)
    sub = exact_solve(sg, r, max_slots=None, budget=200_000)
    if full.known and sub.known and full.weight is not None:
        # the spanner keeps a solution, never a better one than g
        assert sub.weight is not None and sub.weight >= full.weight
