from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from planar3ecp import generators as G
from planar3ecp.connectivity import is_feasible
from planar3ecp.oracle import exact_solve
from planar3ecp.pipeline import PipelineConfig, choose_slicing, solve
from planar3ecp.spanner import spanner_for

from conftest import corners, random_instance, reqs


def test_trivial_instance():
    res = solve(G.grid(3, 3), reqs(9, {}))
    assert res.weight == 0 and res.solution.mult == {}


def test_path_two_terminals_is_shortest_path():
    g = G.path(5)
    res = solve(g, reqs(5, {0: 1, 4: 1}))
    assert res.weight == 4


def test_triangle_value():
    res = solve(G.triangle(), reqs(3, {0: 3, 1: 3, 2: 3}))
    assert res.weight == 5


def test_infeasible_requirement():
    res = solve(G.triangle(), reqs(3, {0: 3, 1: 3}), PipelineConfig(k=2))
    assert res.status == "infeasible"


def test_config_validation():
    with pytest.raises(ValueError):
        PipelineConfig(epsilon=Fraction(3, 2))
    with pytest.raises(ValueError):
        PipelineConfig(k=4)
    with pytest.raises(ValueError):
        PipelineConfig(eta=1)
    assert PipelineConfig(epsilon=Fraction(1, 4)).max_levels == 4
    assert PipelineConfig(epsilon=Fraction(1, 2)).max_levels == 2


def test_grid6_corners():
    g = G.grid(6, 6)
    r = corners(6, 6)
    res = solve(g, r)
    assert is_feasible(g, res.solution, r)
    st_ = res.stats
    assert st_["final_weight"] == res.weight
    assert all(w <= st_["width_cap"] for w in st_["slice_widths"]) or st_["fallback_slices"]


def test_adaptive_eta_respects_cap():
    g = G.grid(6, 6)
    r = corners(6, 6)
    cfg = PipelineConfig(epsilon=Fraction(1, 4))
    _, _, sp = spanner_for(g, r, cfg.epsilon)
    res = choose_slicing(sp.graph(g), r, cfg)
    assert 2 <= res.eta <= cfg.max_levels


def test_width_cap_fallback_still_feasible():
    g = G.grid(4, 4)
    r = corners(4, 4)
    res = solve(g, r, PipelineConfig(eta=4, width_cap=1))
    assert res.stats["fallback_slices"] >= 1
    assert is_feasible(g, res.solution, r)


@given(st.integers(0, 10_000), st.sampled_from([Fraction(1, 2), Fraction(1, 4)]))
def test_pipeline_feasible_and_not_below_oracle(seed, eps):
    g, r = random_instance(seed, n_range=(3, 8), keep=0.7)
    res = solve(g, r, PipelineConfig(epsilon=eps))
    o = exact_solve(g, r, max_slots=None, budget=200_000)
    if o.status == "infeasible":
        assert res.status == "infeasible"
        return
    assert res.status == "ok"
    assert is_feasible(g, res.solution, r)
    if o.known:
        assert res.weight >= o.weight
