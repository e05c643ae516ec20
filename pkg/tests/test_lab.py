import random

from hypothesis import given, settings
from hypothesis import strategies as st

from planar3ecp import generators as G
from planar3ecp.connectivity import is_vertex_minimal, minimalize_vertex
from planar3ecp.io import read_graph
from planar3ecp.cli import bundled_fixtures
from planar3ecp.lab import (
    check_connecting_path_terminal,
    check_cycle_terminal,
    check_two_terminals_per_cycle,
    find_path_systems,
    path_systems,
    random_minimal_instance,
    reverify,
    run_lab,
    simple_cycles,
    terminal_free_connector,
)

from conftest import reqs


def test_cycles_of_k4():
    assert len(simple_cycles(G.k4(), range(6))) == 7


def test_cycles_of_theta():
    g = G.theta((2, 2, 2))
    cycles = simple_cycles(g, range(g.m))
    assert len(cycles) == 3
    assert all({0, 1} <= set(vs) for vs, _ in cycles)


def test_parallel_edges_form_a_cycle():
    from planar3ecp.graph import EmbeddedMultigraph

    g = EmbeddedMultigraph(2, [(0, 1), (0, 1)], [[0, 2], [3, 1]])
    assert simple_cycles(g, [0, 1]) == [([0, 1], [0, 1])]


def test_single_cycle_two_terminals_passes():
    g = G.cycle(5)
    r = reqs(5, {0: 2, 2: 2})
    rep = check_cycle_terminal(g, r, range(5))
    assert rep.ok and rep.cycles_checked == 1


def test_theta_minimal_biconnecting():
    g = G.theta((2, 3, 2))
    r = reqs(g.n, {0: 2, 1: 2})
    sub = minimalize_vertex(g, range(g.m), r)
    rep = check_cycle_terminal(g, r, sub)
    assert rep.ok
    rep = check_connecting_path_terminal(g, r, sub, 0, 1)
    assert rep.ok


def test_k4_all_terminals():
    g = G.k4()
    rep = check_two_terminals_per_cycle(g, range(4), range(6))
    assert rep.ok and rep.cycles_checked == 7


def test_octahedron_minimal_triconnected():
    g = G.octahedron()
    r = reqs(6, {0: 3, 1: 3, 3: 3})
    sub = minimalize_vertex(g, range(g.m), r)
    assert is_vertex_minimal(g, sub, r)
    assert check_two_terminals_per_cycle(g, r.terminals, sub).ok


def test_violation_is_reverified():
    g = G.cycle(4)
    rep = check_cycle_terminal(g, reqs(4, {}), range(4))
    assert not rep.ok
    assert all(reverify(g, w) for w in rep.violations)
    # a doctored witness is rejected
    bad = dict(rep.violations[0], terminals=[0])
    assert not reverify(g, bad)


def figure_fixture():
    text = dict(bundled_fixtures())["minimal_triconnected.graph"]
    return read_graph(text)


def test_figure_fixture_is_minimal_triconnected():
    g, r = figure_fixture()
    assert set(r[t] for t in r.terminals) == {3}
    assert is_vertex_minimal(g, range(g.m), r)


def test_figure_fixture_has_failing_and_passing_systems():
    g, r = figure_fixture()
    res = find_path_systems(g, r.terminals, range(g.m), 0, 1, 3, want_failing=True)
    assert res.failing is not None and res.connector is not None
    assert not set(res.connector) & set(r.terminals)
    assert res.passing is not None
    assert terminal_free_connector(g, range(g.m), r.terminals, res.passing) is None
    assert check_connecting_path_terminal(g, r, range(g.m), 0, 1).ok


def test_path_systems_are_disjoint():
    g = G.octahedron()
    for system in path_systems(g, range(g.m), 0, 3, 3):
        inner = [set(vs[1:-1]) for vs, _ in system]
        assert not (inner[0] & inner[1] or inner[0] & inner[2] or inner[1] & inner[2])


def test_run_lab_small():
    reps = run_lab(10, seed=4)
    assert all(rep.ok for rep in reps.values())
    assert reps["cycle-terminal"].instances == 10


@settings(max_examples=25)
@given(st.integers(0, 10_000))
def test_random_minimal_instances(seed):
    inst = random_minimal_instance(random.Random(seed), n_range=(4, 8))
    if inst is None:
        return
    g, r, sub = inst.graph, inst.req, inst.minimal
    assert is_vertex_minimal(g, sub, r)
    assert check_cycle_terminal(g, r, sub).ok
    x, y = r.terminals[:2]
    assert check_connecting_path_terminal(g, r, sub, x, y).ok


def test_run_lab_witnesses_carry_their_instance():
    g = G.cycle(4)
    rep = check_cycle_terminal(g, reqs(4, {}), range(4))
    from planar3ecp.io import write_graph

    w = dict(rep.violations[0], graph=write_graph(g))
    assert reverify(None, w)
