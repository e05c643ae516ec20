"""Empirical checks of structural properties of minimal vertex-connected solutions.

Three properties are checked on explicit subgraphs:

* every simple cycle of a minimal ``(Q, r)``-vertex-connected graph with
  ``r`` in ``{2, 3}`` contains a terminal;
* every simple cycle of a planar graph that minimally pairwise triconnects
  ``Q`` contains at least two terminals;
* for terminals ``x, y`` there is a system of ``min(r(x), r(y))`` internally
  disjoint ``x``-to-``y`` paths such that every path connecting two of them
  contains a terminal.

Violations carry a witness that :func:`reverify` re-checks from scratch.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .connectivity import InfeasibleError, is_vertex_feasible, is_vertex_minimal, minimalize_vertex
from .generators import from_neighbor_rotations, random_triangulation
from .graph import EmbeddedMultigraph, RequirementMap, as_requirements
from .io import read_graph, write_graph

CYCLE_CAP = 200_000
MAX_LAB_VERTICES = 10


class CycleLimit(RuntimeError):
    pass


@dataclass
class TheoremReport:
    theorem: str
    instances: int = 0
    violations: list = field(default_factory=list)
    unknown: int = 0
    cycles_checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: "TheoremReport") -> None:
        self.instances += other.instances
        self.violations.extend(other.violations)
        self.unknown += other.unknown
        self.cycles_checked += other.cycles_checked

    def as_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "instances": self.instances,
            "violations": len(self.violations),
            "unknown": self.unknown,
            "cycles_checked": self.cycles_checked,
            "witnesses": self.violations,
        }


# -- cycles ---------------------------------------------------------------------------


def simple_cycles(g: EmbeddedMultigraph, edges: Iterable[int], cap: int = CYCLE_CAP) -> list[tuple[list[int], list[int]]]:
    """All simple cycles of the subgraph on ``edges`` as ``(vertices, edge ids)``.

    Each cycle is reported once: it starts at its smallest vertex and its
    first edge id is smaller than its last.  Parallel edges give 2-cycles.
    """
    edges = sorted(set(e for e in edges if g.eu[e] != g.ev[e]))
    adj: dict[int, list[tuple[int, int]]] = {}
    for e in edges:
        u, v = g.eu[e], g.ev[e]
        adj.setdefault(u, []).append((v, e))
        adj.setdefault(v, []).append((u, e))
    out = []
    for s in sorted(adj):
        vs = [s]
        es: list[int] = []
        on = {s}

        def dfs(x):
            for y, e in adj[x]:
                if y == s and es and e != es[0] and es[0] < e:
                    out.append((list(vs), es + [e]))
                    if len(out) > cap:
                        raise CycleLimit(f"more than {cap} cycles")
                elif y > s and y not in on:
                    vs.append(y)
                    es.append(e)
                    on.add(y)
                    dfs(y)
                    on.discard(y)
                    vs.pop()
                    es.pop()

        dfs(s)
    return out


def _is_cycle(g: EmbeddedMultigraph, sub: set[int], vertices: Sequence[int], edge_ids: Sequence[int]) -> bool:
    if len(vertices) != len(edge_ids) or len(set(vertices)) != len(vertices) or len(vertices) < 2:
        return False
    if len(set(edge_ids)) != len(edge_ids) or not set(edge_ids) <= sub:
        return False
    for i, e in enumerate(edge_ids):
        a, b = vertices[i], vertices[(i + 1) % len(vertices)]
        if {g.eu[e], g.ev[e]} != {a, b}:
            return False
    return True


# -- cycle checks ----------------------------------------------------------------------


def _cycle_check(g, terminals, edges, need: int, theorem: str) -> TheoremReport:
    rep = TheoremReport(theorem, instances=1)
    q = set(terminals)
    sub = sorted(set(edges))
    for vs, es in simple_cycles(g, sub):
        rep.cycles_checked += 1
        hits = sorted(q.intersection(vs))
        if len(hits) < need:
            rep.violations.append({
                "kind": "cycle",
                "need": need,
                "cycle_vertices": vs,
                "cycle_edges": es,
                "terminals": sorted(q),
                "subgraph": sub,
            })
    return rep


def check_cycle_terminal(g: EmbeddedMultigraph, r, minimal_edges: Iterable[int]) -> TheoremReport:
    """Every simple cycle of the minimal subgraph contains a terminal."""
    r = as_requirements(r, g.n)
    return _cycle_check(g, r.terminals, minimal_edges, 1, "cycle-terminal")


def check_two_terminals_per_cycle(g: EmbeddedMultigraph, terminals: Iterable[int], minimal_edges: Iterable[int]) -> TheoremReport:
    """Every simple cycle of a minimal triconnecting subgraph holds two terminals."""
    return _cycle_check(g, terminals, minimal_edges, 2, "two-terminals-per-cycle")


# -- disjoint path systems ---------------------------------------------------------------


def _paths(adj, x, y, cap):
    out = []
    vs = [x]
    es: list[int] = []
    on = {x}

    def dfs(u):
        for w, e in adj.get(u, ()):
            if w == y:
                out.append((tuple(vs + [y]), tuple(es + [e])))
                if len(out) > cap:
                    raise CycleLimit("too many paths")
            elif w not in on:
                vs.append(w)
                es.append(e)
                on.add(w)
                dfs(w)
                on.discard(w)
                vs.pop()
                es.pop()

    dfs(x)
    return out


def path_systems(g: EmbeddedMultigraph, edges: Iterable[int], x: int, y: int, count: int, cap: int = 20_000):
    """Sets of ``count`` internally vertex-disjoint ``x``-``y`` paths, each
    as ``(vertex tuple, edge tuple)``; yields systems in a fixed order."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for e in sorted(set(edges)):
        u, v = g.eu[e], g.ev[e]
        if u == v:
            continue
        adj.setdefault(u, []).append((v, e))
        adj.setdefault(v, []).append((u, e))
    paths = sorted(_paths(adj, x, y, cap), key=lambda p: (len(p[1]), p[1]))
    inner = [set(p[0][1:-1]) for p in paths]

    def extend(start, chosen, used_v, used_e):
        if len(chosen) == count:
            yield [paths[i] for i in chosen]
            return
        for i in range(start, len(paths)):
            if inner[i] & used_v or set(paths[i][1]) & used_e:
                continue
            yield from extend(i + 1, chosen + [i], used_v | inner[i], used_e | set(paths[i][1]))

    yield from extend(0, [], set(), set())


def terminal_free_connector(g: EmbeddedMultigraph, edges: Iterable[int], terminals: Iterable[int], system) -> list[int] | None:
    """A path joining two different paths of ``system`` with no terminal on it.

    Endpoints are inner vertices of two different system paths, inner
    vertices avoid the system, and no vertex of the connector is a terminal.
    Returns the connector's vertex list, or None when every connector
    contains a terminal.
    """
    q = set(terminals)
    owner: dict[int, int] = {}
    for i, (vs, _) in enumerate(system):
        for v in vs[1:-1]:
            owner[v] = i
    sys_edges = {e for _, es in system for e in es}
    ends = {vs[0] for vs, _ in system} | {vs[-1] for vs, _ in system}
    adj: dict[int, list[int]] = {}
    for e in sorted(set(edges)):
        if e in sys_edges:
            continue
        u, v = g.eu[e], g.ev[e]
        if u == v or u in q or v in q or u in ends or v in ends:
            continue
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    # search from each labelled vertex through free vertices only
    for a in sorted(owner):
        if a not in adj:
            continue
        prev = {a: None}
        stack = [a]
        while stack:
            u = stack.pop()
            for w in adj.get(u, ()):
                if w in prev:
                    continue
                if w in owner:
                    if owner[w] != owner[a] and (u == a or u not in owner):
                        path = [w, u]
                        while prev[path[-1]] is not None:
                            path.append(prev[path[-1]])
                        return path[::-1]
                    continue
                prev[w] = u
                stack.append(w)
    return None


@dataclass
class PathSystemResult:
    status: str  # pass | fail | unknown
    systems_tried: int
    passing: list | None = None
    failing: list | None = None
    connector: list | None = None


def find_path_systems(
    g: EmbeddedMultigraph,
    terminals: Iterable[int],
    edges: Iterable[int],
    x: int,
    y: int,
    count: int,
    budget: int = 50_000,
    want_failing: bool = False,
) -> PathSystemResult:
    """Search disjoint path systems for one whose connectors all hold a terminal.

    With ``want_failing`` the search continues after a passing system until
    a failing one is seen too.
    """
    q = sorted(set(terminals))
    res = PathSystemResult("fail", 0)
    try:
        for system in path_systems(g, edges, x, y, count):
            res.systems_tried += 1
            if res.systems_tried > budget:
                break
            conn = terminal_free_connector(g, edges, q, system)
            if conn is None:
                if res.passing is None:
                    res.passing = system
            elif res.failing is None:
                res.failing = system
                res.connector = conn
            if res.passing is not None and (not want_failing or res.failing is not None):
                break
    except CycleLimit:
        res.status = "unknown"
        return res
    if res.passing is not None:
        res.status = "pass"
    elif res.systems_tried > budget:
        res.status = "unknown"
    return res


def check_connecting_path_terminal(
    g: EmbeddedMultigraph,
    r,
    minimal_edges: Iterable[int],
    x: int,
    y: int,
    budget: int = 50_000,
) -> TheoremReport:
    """Some ``min(r(x), r(y))`` disjoint ``x``-``y`` paths have only terminal-bearing connectors."""
    r = as_requirements(r, g.n)
    rep = TheoremReport("connecting-path-terminal", instances=1)
    count = min(r[x], r[y])
    edges = sorted(set(minimal_edges))
    res = find_path_systems(g, r.terminals, edges, x, y, count, budget)
    if res.status == "unknown":
        rep.unknown = 1
    elif res.status == "fail":
        rep.violations.append({
            "kind": "paths",
            "x": x,
            "y": y,
            "count": count,
            "systems_tried": res.systems_tried,
            "terminals": list(r.terminals),
            "subgraph": edges,
        })
    return rep


# -- witness re-verification -----------------------------------------------------------------


def reverify(g: EmbeddedMultigraph | None, witness: dict) -> bool:
    """True iff ``witness`` is a genuine counterexample, recomputed independently.

    ``g`` may be None when the witness carries its instance (as from :func:`run_lab`).
    """
    if g is None:
        g, _ = read_graph(witness["graph"])
    sub = set(witness["subgraph"])
    q = set(witness["terminals"])
    if witness["kind"] == "cycle":
        vs, es = witness["cycle_vertices"], witness["cycle_edges"]
        return _is_cycle(g, sub, vs, es) and len(q.intersection(vs)) < witness["need"]
    if witness["kind"] == "paths":
        res = find_path_systems(g, q, sub, witness["x"], witness["y"], witness["count"], budget=10**9)
        return res.status == "fail"
    raise ValueError(f"unknown witness kind {witness['kind']!r}")


# -- instance generation ---------------------------------------------------------------------


@dataclass
class LabInstance:
    graph: EmbeddedMultigraph
    req: RequirementMap
    minimal: list[int]


def random_minimal_instance(
    rng: random.Random,
    n_range=(4, MAX_LAB_VERTICES),
    reqs=(2, 3),
    max_weight: int = 5,
) -> LabInstance | None:
    """Triangulation, random terminals and requirements, then vertex-mode minimalization.

    Random weights randomise the deletion order.  Returns None when the
    requirements cannot be met (such draws are discarded, not repaired).
    """
    n = rng.randint(*n_range)
    rot = random_triangulation(n, rng)
    g = from_neighbor_rotations(rot, lambda e: rng.randint(1, max_weight))
    t = rng.randint(2, n)
    chosen = rng.sample(range(n), t)
    req = [0] * n
    for v in chosen:
        req[v] = rng.choice(reqs)
    r = RequirementMap(tuple(req))
    if not is_vertex_feasible(g, range(g.m), r):
        return None
    try:
        sub = minimalize_vertex(g, range(g.m), r)
    except InfeasibleError:
        return None
    return LabInstance(g, r, sub)


def run_lab(instances: int, seed: int = 0, path_pairs: int = 1) -> dict[str, TheoremReport]:
    """Generate minimal instances and run every check; one report per property."""
    rng = random.Random(seed)
    reports = {
        "cycle-terminal": TheoremReport("cycle-terminal"),
        "two-terminals-per-cycle": TheoremReport("two-terminals-per-cycle"),
        "connecting-path-terminal": TheoremReport("connecting-path-terminal"),
    }
    done = {"mixed": 0, "tri": 0}
    while done["mixed"] < instances or done["tri"] < instances:
        kind = "mixed" if done["mixed"] <= done["tri"] else "tri"
        inst = random_minimal_instance(rng, reqs=(2, 3) if kind == "mixed" else (3,))
        if inst is None:
            continue
        g, r, sub = inst.graph, inst.req, inst.minimal
        done[kind] += 1
        found = []
        if kind == "mixed":
            found.append(check_cycle_terminal(g, r, sub))
        else:
            found.append(check_two_terminals_per_cycle(g, r.terminals, sub))
        if g.n <= 9:
            pairs = list(combinations(r.terminals, 2))
            rng.shuffle(pairs)
            for x, y in pairs[:path_pairs]:
                found.append(check_connecting_path_terminal(g, r, sub, x, y))
        for rep in found:
            for w in rep.violations:
                # keep the instance so the witness can be re-checked on its own
                w["graph"] = write_graph(g, r)
            reports[rep.theorem].merge(rep)
    return reports


def verify_minimal(inst: LabInstance) -> bool:
    return is_vertex_minimal(inst.graph, inst.minimal, inst.req)


__all__ = [
    "LabInstance",
    "PathSystemResult",
    "TheoremReport",
    "check_connecting_path_terminal",
    "check_cycle_terminal",
    "check_two_terminals_per_cycle",
    "find_path_systems",
    "path_systems",
    "random_minimal_instance",
    "reverify",
    "run_lab",
    "simple_cycles",
    "terminal_free_connector",
]
