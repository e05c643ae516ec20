"""Edge and vertex connectivity, feasibility and minimality of solutions.

Every edge copy is a unit-capacity arc pair, so multiplicities are honoured
exactly by the flow computations.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .graph import EmbeddedMultigraph, MultiSolution, as_requirements
from .kernels import FlowNetwork


class InfeasibleError(ValueError):
    """Raised when a solution does not meet the requirements."""


@dataclass(frozen=True)
class ConnectivityReport:
    pair: tuple[int, int]
    lam: int
    kappa: int | None = None


def _network(g: EmbeddedMultigraph) -> FlowNetwork:
    net = g.__dict__.get("_flow_network")
    if net is None:
        net = FlowNetwork(g.n, g.eu, g.ev)
        g.__dict__["_flow_network"] = net
    return net


def mult_vector(g: EmbeddedMultigraph, sol) -> list[int]:
    """Multiplicity per edge.

    Accepts a MultiSolution, a mapping edge -> multiplicity, a set of edge
    ids (each once) or a length-``m`` multiplicity sequence.
    """
    if isinstance(sol, MultiSolution):
        return list(sol.vector(g.m))
    if isinstance(sol, Mapping):
        return [int(sol.get(e, 0)) for e in range(g.m)]
    if isinstance(sol, (set, frozenset)):
        return [1 if e in sol else 0 for e in range(g.m)]
    vec = [int(x) for x in sol]
    if len(vec) != g.m:
        raise ValueError(f"multiplicity vector has length {len(vec)}, graph has {g.m} edges")
    return vec


def arc_caps(vec: Sequence[int]) -> np.ndarray:
    caps = np.empty(2 * len(vec), dtype=np.int32)
    caps[0::2] = vec
    caps[1::2] = vec
    return caps


def edge_connectivity(g: EmbeddedMultigraph, sol, u: int, v: int, limit: int | None = None) -> int:
    """Maximum number of edge-disjoint u-v paths using the given copies."""
    if u == v:
        raise ValueError("edge connectivity of a vertex with itself is undefined")
    return _network(g).max_flow(arc_caps(mult_vector(g, sol)), u, v, limit)


def vertex_connectivity(g: EmbeddedMultigraph, u: int, v: int, sol=None, limit: int | None = None) -> int:
    """Maximum number of internally vertex-disjoint u-v paths.

    Each direct u-v edge copy counts as its own path.  ``sol`` restricts to a
    sub-multigraph (default: every edge once).
    """
    if u == v:
        raise ValueError("vertex connectivity of a vertex with itself is undefined")
    vec = [1] * g.m if sol is None else mult_vector(g, sol)
    n = g.n
    big = 1 << 20
    tails, heads, caps = [], [], []
    # vertex x splits into x (in) and x + n (out)
    for x in range(n):
        tails.append(x)
        heads.append(x + n)
        c = big if x in (u, v) else 1
        caps += [c, 0]
    for e in range(g.m):
        if not vec[e]:
            continue
        a, b = g.eu[e], g.ev[e]
        for s, t in ((a, b), (b, a)):
            tails.append(s + n)
            heads.append(t)
            caps += [vec[e], 0]
    net = FlowNetwork(2 * n, tails, heads)
    return net.max_flow(np.asarray(caps, dtype=np.int32), u + n, v, limit)


def connectivity_report(g, sol, u, v, with_kappa=False) -> ConnectivityReport:
    lam = edge_connectivity(g, sol, u, v)
    kappa = vertex_connectivity(g, u, v, sol) if with_kappa else None
    return ConnectivityReport((u, v), lam, kappa)


def violated_pair(g: EmbeddedMultigraph, sol, r) -> tuple[int, int, int, int] | None:
    """First terminal pair short of its requirement as ``(u, v, need, have)``."""
    r = as_requirements(r, g.n)
    terms = r.terminals
    caps = arc_caps(mult_vector(g, sol))
    net = _network(g)
    for a, b in combinations(terms, 2):
        need = min(r[a], r[b])
        have = net.max_flow(caps, a, b, need)
        if have < need:
            return a, b, need, have
    return None


def is_feasible(g: EmbeddedMultigraph, sol, r) -> bool:
    """Every terminal pair has ``min(r(u), r(v))`` edge-disjoint paths."""
    r = as_requirements(r, g.n)
    terms = r.terminals
    if len(terms) < 2:
        return True
    return bool(_network(g).feasible(arc_caps(mult_vector(g, sol)), terms, [r[t] for t in terms]))


def removal_order(g: EmbeddedMultigraph, edges: Iterable[int]) -> list[int]:
    """Nonincreasing weight, ties by smaller edge id."""
    return sorted(edges, key=lambda e: (-g.iw[e], e))


def minimalize(g: EmbeddedMultigraph, sol, r, tie_break=None, k: int | None = None) -> MultiSolution:
    """Drop edge copies greedily until every remaining copy is needed.

    Feasibility is monotone in the copies, so a copy that cannot be removed
    now can never be removed later and one pass suffices.
    """
    r = as_requirements(r, g.n)
    vec = mult_vector(g, sol)
    if k is None:
        k = sol.k if isinstance(sol, MultiSolution) else max(3, max(vec, default=0))
    terms = r.terminals
    reqs = [r[t] for t in terms]
    net = _network(g)
    if len(terms) >= 2 and not net.feasible(arc_caps(vec), terms, reqs):
        raise InfeasibleError("minimalize needs a feasible solution")
    order = tie_break(g, [e for e in range(g.m) if vec[e]]) if tie_break else removal_order(
        g, [e for e in range(g.m) if vec[e]]
    )
    if len(terms) < 2:
        return MultiSolution({}, k)
    caps = arc_caps(vec)
    for e in order:
        while vec[e] > 0:
            caps[2 * e] -= 1
            caps[2 * e + 1] -= 1
            if net.feasible(caps, terms, reqs):
                vec[e] -= 1
            else:
                caps[2 * e] += 1
                caps[2 * e + 1] += 1
                break
    return MultiSolution.from_vector(vec, k)


def is_minimal(g: EmbeddedMultigraph, sol, r) -> bool:
    """Feasible and no single copy can be removed."""
    r = as_requirements(r, g.n)
    vec = mult_vector(g, sol)
    if not is_feasible(g, vec, r):
        return False
    for e in range(g.m):
        if vec[e]:
            vec[e] -= 1
            ok = is_feasible(g, vec, r)
            vec[e] += 1
            if ok:
                return False
    return True


# -- vertex connectivity mode ---------------------------------------------------------


def is_vertex_feasible(g: EmbeddedMultigraph, edges: Iterable[int], r) -> bool:
    """Every terminal pair has ``min(r(u), r(v))`` internally disjoint paths in ``edges``."""
    r = as_requirements(r, g.n)
    sol = set(edges)
    for a, b in combinations(r.terminals, 2):
        need = min(r[a], r[b])
        if vertex_connectivity(g, a, b, sol, need) < need:
            return False
    return True


def minimalize_vertex(g: EmbeddedMultigraph, edges: Iterable[int], r) -> list[int]:
    """Edge-minimal subgraph for the vertex-connectivity requirements."""
    r = as_requirements(r, g.n)
    cur = set(edges)
    if not is_vertex_feasible(g, cur, r):
        raise InfeasibleError("minimalize_vertex needs a feasible edge set")
    for e in removal_order(g, sorted(cur)):
        cur.discard(e)
        if not is_vertex_feasible(g, cur, r):
            cur.add(e)
    return sorted(cur)


def is_vertex_minimal(g: EmbeddedMultigraph, edges: Iterable[int], r) -> bool:
    cur = set(edges)
    if not is_vertex_feasible(g, cur, r):
        return False
    return all(not is_vertex_feasible(g, cur - {e}, r) for e in cur)


# -- independent brute-force checks --------------------------------------------------


def simple_paths(g: EmbeddedMultigraph, vec: Sequence[int], u: int, v: int) -> list[tuple[int, ...]]:
    """All simple u-v paths (as edge-id tuples) over edges with positive multiplicity."""
    adj = [[] for _ in range(g.n)]
    for e in range(g.m):
        if vec[e]:
            adj[g.eu[e]].append((g.ev[e], e))
            adj[g.ev[e]].append((g.eu[e], e))
    out = []
    seen = [False] * g.n

    def dfs(x, acc):
        if x == v:
            out.append(tuple(acc))
            return
        seen[x] = True
        for y, e in adj[x]:
            if not seen[y]:
                acc.append(e)
                dfs(y, acc)
                acc.pop()
        seen[x] = False

    dfs(u, [])
    out.sort(key=lambda p: (len(p), p))
    return out


def brute_force_min_cut(g: EmbeddedMultigraph, vec: Sequence[int], u: int, v: int) -> int:
    """Minimum u-v cut by enumerating every vertex bipartition."""
    others = [x for x in range(g.n) if x not in (u, v)]
    best = None
    for mask in range(1 << len(others)):
        side = {u} | {others[i] for i in range(len(others)) if mask >> i & 1}
        cut = sum(vec[e] for e in range(g.m) if (g.eu[e] in side) != (g.ev[e] in side))
        best = cut if best is None else min(best, cut)
    return best


def exhaustive_path_packing(g: EmbeddedMultigraph, sol, u: int, v: int) -> int:
    """Largest family of edge-disjoint u-v paths found by exhaustive search.

    Paths are simple; edge ``e`` may be used by ``mult(e)`` paths.  The
    search stops early only when it meets a brute-force cut bound, which no
    packing can exceed.
    """
    vec = mult_vector(g, sol)
    paths = simple_paths(g, vec, u, v)
    bound = brute_force_min_cut(g, vec, u, v)
    cap = list(vec)
    best = 0

    def fits(p):
        # simple paths never repeat an edge, so positive capacity suffices
        return all(cap[e] > 0 for e in p)

    def dfs(i, count):
        nonlocal best
        if count > best:
            best = count
        if best >= bound:
            return True
        for j in range(i, len(paths)):
            p = paths[j]
            if fits(p):
                for e in p:
                    cap[e] -= 1
                stop = dfs(j, count + 1)
                for e in p:
                    cap[e] += 1
                if stop:
                    return True
        return False

    dfs(0, 0)
    return best

