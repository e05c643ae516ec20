"""Branch decompositions: heuristic construction, validation and rooting."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..graph import EmbeddedMultigraph


class WidthExceeded(ValueError):
    """No decomposition within the width cap was found."""


@dataclass
class BDNode:
    children: tuple[int, ...] = ()
    edge: int | None = None  # leaf edge id
    separator: tuple[int, ...] = ()
    edges: frozenset = frozenset()


@dataclass
class BranchDecomposition:
    """Rooted binary decomposition tree over the edges of ``graph``.

    Leaves are in bijection with the edges.  ``separator`` of a node is the
    vertex set shared by its edges and the remaining edges; the root has an
    empty separator.  The root is an internal node joining the designated
    root leaf with the rest (or the single leaf of a one-edge graph).
    """

    graph: EmbeddedMultigraph
    nodes: list[BDNode]
    root: int
    root_leaf: int | None = None
    stats: dict = field(default_factory=dict)

    @property
    def width(self) -> int:
        return max((len(nd.separator) for nd in self.nodes), default=0)

    def postorder(self) -> list[int]:
        out = []
        stack = [(self.root, False)]
        while stack:
            x, done = stack.pop()
            if done:
                out.append(x)
                continue
            stack.append((x, True))
            for c in reversed(self.nodes[x].children):
                stack.append((c, False))
        return out

    def leaves(self) -> list[int]:
        return [i for i, nd in enumerate(self.nodes) if nd.edge is not None]

    def validate(self) -> None:
        """Recompute edge sets and separators; raise on any mismatch."""
        g = self.graph
        seen = []
        for x in self.postorder():
            nd = self.nodes[x]
            if nd.edge is not None:
                if nd.children:
                    raise AssertionError("leaf with children")
                edges = frozenset([nd.edge])
                seen.append(nd.edge)
            else:
                if len(nd.children) != 2:
                    raise AssertionError("internal node must have two children")
                a, b = (self.nodes[c].edges for c in nd.children)
                if a & b:
                    raise AssertionError("children share edges")
                edges = a | b
            if edges != nd.edges:
                raise AssertionError(f"node {x}: stored edge set differs")
            if tuple(separator_of(g, edges)) != nd.separator:
                raise AssertionError(f"node {x}: separator mismatch")
        if sorted(seen) != list(range(g.m)):
            raise AssertionError("leaves are not in bijection with the edges")


def separator_of(g: EmbeddedMultigraph, edges) -> list[int]:
    inside = set()
    for e in edges:
        inside.add(g.eu[e])
        inside.add(g.ev[e])
    out = set()
    for e in range(g.m):
        if e not in edges:
            for x in (g.eu[e], g.ev[e]):
                if x in inside:
                    out.add(x)
    return sorted(out)


# -- construction ----------------------------------------------------------------------


def _merge_tree(g: EmbeddedMultigraph, rng: random.Random):
    """Greedy vertex elimination: merge all clusters touching the vertex whose
    merged cluster has the smallest boundary.  Returns (merges, width)."""
    cluster_edges = {e: {e} for e in range(g.m)}
    touch = [set() for _ in range(g.n)]  # vertex -> clusters touching it
    for e in range(g.m):
        touch[g.eu[e]].add(e)
        touch[g.ev[e]].add(e)
    verts_of = {e: {g.eu[e], g.ev[e]} for e in range(g.m)}
    next_id = g.m
    merges = []  # (new_id, a, b)
    width = 0
    alive = {v for v in range(g.n) if len(touch[v]) > 1}

    def boundary(cids):
        vs = set()
        for c in cids:
            vs |= verts_of[c]
        return [x for x in vs if touch[x] - cids]

    while alive:
        best = None
        for v in alive:
            cids = set(touch[v])
            b = len(boundary(cids))
            key = (b, len(cids), rng.random())
            if best is None or key < best[0]:
                best = (key, v)
        v = best[1]
        cids = set(touch[v])
        # merge pairwise, smallest resulting boundary first
        while len(cids) > 1:
            pick = None
            items = sorted(cids)
            for i in range(len(items)):
                for j in range(i + 1, len(items)):
                    a, b = items[i], items[j]
                    sz = len(boundary({a, b}))
                    key = (sz, rng.random())
                    if pick is None or key < pick[0]:
                        pick = (key, a, b)
            _, a, b = pick
            c = next_id
            next_id += 1
            cluster_edges[c] = cluster_edges.pop(a) | cluster_edges.pop(b)
            verts_of[c] = verts_of.pop(a) | verts_of.pop(b)
            for x in verts_of[c]:
                t = touch[x]
                t.discard(a)
                t.discard(b)
                t.add(c)
            width = max(width, len(boundary({c})))
            merges.append((c, a, b))
            cids = (cids - {a, b}) | {c}
        alive = {x for x in alive if len(touch[x]) > 1}
    # remaining clusters (one per connected component) are joined at the end
    rest = sorted(cluster_edges)
    while len(rest) > 1:
        a, b = rest[0], rest[1]
        c = next_id
        next_id += 1
        cluster_edges[c] = cluster_edges.pop(a) | cluster_edges.pop(b)
        verts_of[c] = verts_of.pop(a) | verts_of.pop(b)
        merges.append((c, a, b))
        rest = [c] + rest[2:]
    return merges, width


def _caterpillar(g: EmbeddedMultigraph, order):
    merges = []
    cur = order[0]
    next_id = g.m
    for e in order[1:]:
        merges.append((next_id, cur, e))
        cur = next_id
        next_id += 1
    return merges


def _linear_order(g: EmbeddedMultigraph) -> list[int]:
    """Edges in BFS order of their smaller endpoint, a decent path-like order."""
    if g.m == 0:
        return []
    adj = [[] for _ in range(g.n)]
    for e in range(g.m):
        adj[g.eu[e]].append((g.ev[e], e))
        adj[g.ev[e]].append((g.eu[e], e))
    dist = [-1] * g.n
    order_v = []
    for s in range(g.n):
        if dist[s] != -1:
            continue
        dist[s] = 0
        q = [s]
        for u in q:
            order_v.append(u)
            for v, _ in sorted(adj[u]):
                if dist[v] == -1:
                    dist[v] = dist[u] + 1
                    q.append(v)
    pos = {v: i for i, v in enumerate(order_v)}
    return sorted(range(g.m), key=lambda e: (max(pos[g.eu[e]], pos[g.ev[e]]), min(pos[g.eu[e]], pos[g.ev[e]]), e))


def _build(g: EmbeddedMultigraph, merges) -> BranchDecomposition:
    """Unrooted tree from merges, then rooted at the leaf of the smallest edge."""
    adj: dict[int, list[int]] = {e: [] for e in range(g.m)}
    top = None
    for c, a, b in merges:
        adj.setdefault(c, [])
        adj[c] += [a, b]
        adj[a].append(c)
        adj[b].append(c)
        top = c
    if top is not None and len(adj[top]) == 2:
        # suppress the degree-two merge root
        a, b = adj.pop(top)
        adj[a].remove(top)
        adj[b].remove(top)
        adj[a].append(b)
        adj[b].append(a)
    nodes: list[BDNode] = []
    if g.m == 1:
        nodes.append(BDNode(edge=0, edges=frozenset([0])))
        return BranchDecomposition(g, nodes, 0, 0)
    root_leaf = 0

    def make(x, parent):
        # iterative post-order construction to avoid recursion limits
        stack = [(x, parent, False)]
        made = {}
        while stack:
            y, p, done = stack.pop()
            kids = [z for z in adj[y] if z != p]
            if not done:
                stack.append((y, p, True))
                for z in kids:
                    stack.append((z, y, False))
                continue
            if y < g.m and not kids:
                nd = BDNode(edge=y, edges=frozenset([y]))
            else:
                ch = tuple(made[z] for z in kids)
                es = nodes[ch[0]].edges | nodes[ch[1]].edges
                nd = BDNode(children=ch, edges=es)
            nd.separator = tuple(separator_of(g, nd.edges))
            nodes.append(nd)
            made[y] = len(nodes) - 1
        return made[x]

    nb = adj[root_leaf][0]
    rest = make(nb, root_leaf)
    leaf = BDNode(edge=root_leaf, edges=frozenset([root_leaf]))
    leaf.separator = tuple(separator_of(g, leaf.edges))
    nodes.append(leaf)
    leaf_id = len(nodes) - 1
    nodes.append(BDNode(children=(leaf_id, rest), edges=frozenset(range(g.m))))
    return BranchDecomposition(g, nodes, len(nodes) - 1, leaf_id)


def decompose(
    g: EmbeddedMultigraph,
    width_cap: int | None = None,
    seed: int = 0,
    tries: int = 4,
) -> BranchDecomposition:
    """Heuristic branch decomposition; best of greedy elimination runs and a
    caterpillar over a BFS edge order."""
    if g.m == 0:
        raise ValueError("cannot decompose a graph without edges")
    rng = random.Random(seed)
    best = None
    candidates = []
    for t in range(max(1, tries)):
        merges, _ = _merge_tree(g, random.Random(rng.random()))
        candidates.append(("greedy", merges))
    if g.m > 1:
        candidates.append(("caterpillar", _caterpillar(g, _linear_order(g))))
    for name, merges in candidates:
        bd = _build(g, merges)
        key = (bd.width, name != "greedy")
        if best is None or key < best[0]:
            bd.stats["heuristic"] = name
            best = (key, bd)
    bd = best[1]
    if width_cap is not None and bd.width > width_cap:
        raise WidthExceeded(f"best decomposition has width {bd.width} > cap {width_cap}")
    return bd
