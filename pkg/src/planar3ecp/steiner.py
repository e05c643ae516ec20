"""Steiner trees: a metric-closure 2-approximation and exact subset DPs.

``approx_steiner`` seeds the mortar graph.  ``exact_steiner`` is the general
Dreyfus-Wagner recursion; ``boundary_steiner_all`` computes trees for every
subset of vertices on the outer boundary of a disk, the case needed for
portals of a brick, with the compiled kernel when available.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .graph import EmbeddedMultigraph
from .kernels import steiner_all_subsets

EXACT_TERMINAL_CAP = 12


class DisconnectedTerminals(ValueError):
    """The terminals do not lie in one connected component."""


@dataclass(frozen=True)
class SteinerInstance:
    graph: EmbeddedMultigraph
    terminals: tuple[int, ...]

    def __post_init__(self):
        ts = tuple(sorted(set(self.terminals)))
        if not ts:
            raise ValueError("a Steiner instance needs at least one terminal")
        if any(t < 0 or t >= self.graph.n for t in ts):
            raise ValueError("terminal outside the graph")
        object.__setattr__(self, "terminals", ts)


@dataclass(frozen=True)
class SteinerTree:
    edges: tuple[int, ...]
    weight: Fraction


# -- shortest paths -------------------------------------------------------------------------


def _adjacency(g: EmbeddedMultigraph, allowed: set[int] | None = None):
    adj = [[] for _ in range(g.n)]
    for e in range(g.m):
        if allowed is not None and e not in allowed:
            continue
        u, v = g.eu[e], g.ev[e]
        if u == v:
            continue
        adj[u].append((v, e))
        adj[v].append((u, e))
    for row in adj:
        row.sort(key=lambda t: (g.iw[t[1]], t[0], t[1]))
    return adj


def dijkstra(g: EmbeddedMultigraph, source: int, allowed: set[int] | None = None, adj=None):
    """Scaled distances and predecessor edges from ``source``.

    Among equally short routes the predecessor with the smaller vertex id
    wins (then the smaller edge id), so paths are deterministic.
    """
    if adj is None:
        adj = _adjacency(g, allowed)
    dist = [None] * g.n
    pred = [None] * g.n
    best = {source: (0, -1, -1)}
    heap = [(0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if dist[u] is not None:
            continue
        dist[u] = d
        pred[u] = best[u][2] if best[u][2] >= 0 else None
        for v, e in adj[u]:
            if dist[v] is not None:
                continue
            key = (d + g.iw[e], u, e)
            if v not in best or key < best[v]:
                best[v] = key
                heapq.heappush(heap, (key[0], v))
    return dist, pred


def path_edges(g: EmbeddedMultigraph, pred, target: int) -> list[int]:
    out = []
    v = target
    while pred[v] is not None:
        e = pred[v]
        out.append(e)
        v = g.ev[e] if g.eu[e] == v else g.eu[e]
    out.reverse()
    return out


def shortest_path(g: EmbeddedMultigraph, s: int, t: int, allowed: set[int] | None = None) -> list[int]:
    dist, pred = dijkstra(g, s, allowed)
    if dist[t] is None:
        raise DisconnectedTerminals(f"no path between {s} and {t}")
    return path_edges(g, pred, t)


def all_pairs_distances(g: EmbeddedMultigraph, allowed: set[int] | None = None) -> list[list[int | None]]:
    adj = _adjacency(g, allowed)
    return [dijkstra(g, s, adj=adj)[0] for s in range(g.n)]


# -- tree utilities ---------------------------------------------------------------------------


def _mst(g: EmbeddedMultigraph, edges: Iterable[int]) -> list[int]:
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    out = []
    for e in sorted(set(edges), key=lambda e: (g.iw[e], e)):
        a, b = find(g.eu[e]), find(g.ev[e])
        if a != b:
            parent[a] = b
            out.append(e)
    return out


def prune_tree(g: EmbeddedMultigraph, edges: Iterable[int], keep: Iterable[int]) -> list[int]:
    """Spanning forest of ``edges`` with non-``keep`` leaves removed repeatedly."""
    tree = set(_mst(g, edges))
    keep = set(keep)
    deg: dict[int, int] = {}
    inc: dict[int, set] = {}
    for e in tree:
        for x in (g.eu[e], g.ev[e]):
            deg[x] = deg.get(x, 0) + 1
            inc.setdefault(x, set()).add(e)
    stack = [x for x, d in deg.items() if d == 1 and x not in keep]
    while stack:
        x = stack.pop()
        if deg.get(x, 0) != 1 or x in keep:
            continue
        (e,) = inc[x]
        tree.discard(e)
        y = g.ev[e] if g.eu[e] == x else g.eu[e]
        for z in (x, y):
            inc[z].discard(e)
            deg[z] -= 1
        if deg[y] == 1 and y not in keep:
            stack.append(y)
    return sorted(tree)


def is_steiner_tree(g: EmbeddedMultigraph, edges: Sequence[int], terminals: Iterable[int]) -> bool:
    """Acyclic, connected and spanning ``terminals``."""
    terminals = set(terminals)
    if not edges:
        return len(terminals) <= 1
    verts = set()
    for e in edges:
        verts.add(g.eu[e])
        verts.add(g.ev[e])
    if not terminals <= verts:
        return False
    if len(set(edges)) != len(edges) or len(edges) != len(verts) - 1:
        return False
    return len(_mst(g, edges)) == len(edges)


# -- approximation ------------------------------------------------------------------------------


def approx_steiner(inst: SteinerInstance) -> SteinerTree:
    """Metric-closure MST, expanded to shortest paths, then MST and leaf pruning.

    Weight is at most twice the optimum.
    """
    g = inst.graph
    ts = list(inst.terminals)
    if len(ts) == 1:
        return SteinerTree((), Fraction(0))
    adj = _adjacency(g)
    runs = {t: dijkstra(g, t, adj=adj) for t in ts}
    for t in ts[1:]:
        if runs[ts[0]][0][t] is None:
            raise DisconnectedTerminals(f"terminals {ts[0]} and {t} are not connected")
    pairs = sorted(
        (runs[a][0][b], a, b) for i, a in enumerate(ts) for b in ts[i + 1:]
    )
    parent = {t: t for t in ts}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    union = set()
    for _, a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            union.update(path_edges(g, runs[a][1], b))
    edges = prune_tree(g, union, ts)
    return SteinerTree(tuple(edges), g.weight(edges))


# -- exact ----------------------------------------------------------------------------------------


def exact_steiner(inst: SteinerInstance, cap: int = EXACT_TERMINAL_CAP) -> SteinerTree:
    """Minimum Steiner tree by the Dreyfus-Wagner subset recursion."""
    g = inst.graph
    ts = list(inst.terminals)
    if len(ts) > cap:
        raise ValueError(f"{len(ts)} terminals exceed the exact solver cap {cap}")
    if len(ts) == 1:
        return SteinerTree((), Fraction(0))
    n = g.n
    inf = np.iinfo(np.int64).max // 4
    adj = _adjacency(g)
    root, rest = ts[0], ts[1:]
    s = len(rest)
    size = 1 << s
    dp = np.full((size, n), inf, dtype=np.int64)
    back: list = [None] * size
    for mask in range(1, size):
        cur = dp[mask]
        bk = np.full(n, -1, dtype=np.int64)  # >= 0 edge, -1 leaf, -2-sub split
        if mask & (mask - 1) == 0:
            t = rest[mask.bit_length() - 1]
            cur[t] = 0
        else:
            low = mask & -mask
            sub = (mask - 1) & mask
            while sub:
                if sub & low:
                    x = dp[sub] + dp[mask ^ sub]
                    better = x < cur
                    if better.any():
                        cur[better] = x[better]
                        bk[better] = -2 - sub
                sub = (sub - 1) & mask
        # relax along edges
        settled = np.zeros(n, dtype=bool)
        heap = [(int(cur[v]), v) for v in range(n) if cur[v] < inf]
        heapq.heapify(heap)
        while heap:
            d, u = heapq.heappop(heap)
            if settled[u] or d > cur[u]:
                continue
            settled[u] = True
            for v, e in adj[u]:
                nd = d + g.iw[e]
                if nd < cur[v]:
                    cur[v] = nd
                    bk[v] = e
                    heapq.heappush(heap, (nd, v))
        back[mask] = bk
    full = size - 1
    if dp[full, root] >= inf:
        raise DisconnectedTerminals("terminals are not connected")
    edges = []
    stack = [(full, root)]
    while stack:
        mask, v = stack.pop()
        b = int(back[mask][v])
        if b == -1:
            continue
        if b >= 0:
            edges.append(b)
            stack.append((mask, g.ev[b] if g.eu[b] == v else g.eu[b]))
        else:
            sub = -2 - b
            stack.append((sub, v))
            stack.append((mask ^ sub, v))
    edges = prune_tree(g, edges, ts)
    w = g.weight(edges)
    if w * g.scale != int(dp[full, root]):
        raise AssertionError("reconstructed tree weight differs from the table")
    return SteinerTree(tuple(edges), w)


def brute_force_steiner(g: EmbeddedMultigraph, terminals: Iterable[int]) -> Fraction:
    """Lightest connected edge subset spanning ``terminals``; tiny graphs only."""
    ts = set(terminals)
    if len(ts) <= 1:
        return Fraction(0)
    best = None
    for mask in range(1, 1 << g.m):
        es = [e for e in range(g.m) if mask >> e & 1]
        verts = {g.eu[e] for e in es} | {g.ev[e] for e in es}
        if not ts <= verts:
            continue
        if len(_mst(g, es)) != len(verts) - 1:
            continue
        w = g.weight(es)
        if best is None or w < best:
            best = w
    return best


# -- all subsets of boundary terminals in a disk -----------------------------------------------------


def boundary_steiner_all(nv: int, eu, ev, w, terms: Sequence[int]):
    """Costs and edge sets of optimal trees for every subset of ``terms``.

    ``terms`` must lie on the outer face of a disk-embedded graph in cyclic
    order.  Thin wrapper over the kernel; see
    :func:`planar3ecp.kernels.steiner_all_subsets`.
    """
    return steiner_all_subsets(nv, list(eu), list(ev), list(w), list(terms))
