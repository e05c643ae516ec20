"""Fixture and random instance generators.

Every generator returns a validated :class:`EmbeddedMultigraph`; straight-line
drawings go through :func:`from_positions`, random triangulations are built
combinatorially from neighbour rotations.
"""

from __future__ import annotations

import math
import random
from typing import Sequence

from .graph import EmbeddedMultigraph, RequirementMap, from_positions


def from_neighbor_rotations(rot: Sequence[Sequence[int]], weights=None) -> EmbeddedMultigraph:
    """Simple graph from per-vertex counterclockwise neighbour lists.

    Edges are numbered by sorted ``(min, max)`` endpoint pairs.
    """
    pairs = sorted({(min(u, v), max(u, v)) for u, nb in enumerate(rot) for v in nb})
    eid = {p: i for i, p in enumerate(pairs)}
    darts = []
    for u, nb in enumerate(rot):
        row = []
        for v in nb:
            e = eid[(min(u, v), max(u, v))]
            row.append(2 * e if u < v else 2 * e + 1)
        darts.append(row)
    if weights is not None and callable(weights):
        weights = [weights(e) for e in range(len(pairs))]
    return EmbeddedMultigraph(len(rot), pairs, darts, weights)


def _insert_after(lst: list[int], anchor: int, x: int) -> None:
    lst.insert(lst.index(anchor) + 1, x)


def random_triangulation(n: int, rng: random.Random, flips: int | None = None) -> list[list[int]]:
    """Neighbour rotations of a random maximal planar graph on ``n >= 3`` vertices.

    Vertices are inserted into random faces and then random edge flips mix
    the degree sequence.
    """
    if n < 3:
        raise ValueError("a triangulation needs at least 3 vertices")
    rot = [[1, 2], [2, 0], [0, 1]]
    faces = [(0, 1, 2), (1, 0, 2)]
    for x in range(3, n):
        i = rng.randrange(len(faces))
        a, b, c = faces[i]
        # face a->b->c: c follows a at b, a follows b at c, b follows c at a
        _insert_after(rot[b], a, x)
        _insert_after(rot[c], b, x)
        _insert_after(rot[a], c, x)
        rot.append([a, c, b])
        faces[i] = (a, b, x)
        faces.append((b, c, x))
        faces.append((c, a, x))
    if flips is None:
        flips = 2 * n
    for _ in range(flips):
        a = rng.randrange(n)
        if len(rot[a]) <= 3:
            continue
        b = rng.choice(rot[a])
        if len(rot[b]) <= 3:
            continue
        rb, ra = rot[b], rot[a]
        c = rb[(rb.index(a) + 1) % len(rb)]
        d = ra[(ra.index(b) + 1) % len(ra)]
        if c == d or d in rot[c]:
            continue
        ra.remove(b)
        rb.remove(a)
        _insert_after(rot[d], a, c)
        _insert_after(rot[c], b, d)
    return rot


def random_planar_graph(
    n: int,
    rng: random.Random,
    keep: float = 1.0,
    max_weight: int = 1,
    connected: bool = True,
) -> EmbeddedMultigraph:
    """Random triangulation with each edge kept with probability ``keep``.

    Deleted edges never disconnect the graph when ``connected`` is set.
    Weights are uniform integers in ``1..max_weight``.
    """
    if n == 1:
        return EmbeddedMultigraph(1, [], [[]])
    if n == 2:
        return EmbeddedMultigraph(2, [(0, 1)], [[0], [1]], [rng.randint(1, max_weight)])
    rot = random_triangulation(n, rng)
    g = from_neighbor_rotations(rot, lambda e: rng.randint(1, max_weight))
    if keep >= 1.0:
        return g
    order = list(range(g.m))
    rng.shuffle(order)
    kept = set(range(g.m))
    for e in order:
        if rng.random() < keep:
            continue
        trial = kept - {e}
        if connected and not _connected(g.n, [(g.eu[f], g.ev[f]) for f in trial]):
            continue
        kept = trial
    return g.subgraph(kept).detached()


def _connected(n: int, edges) -> bool:
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == n


def random_requirements(n: int, rng: random.Random, terminals: int, max_req: int = 3) -> RequirementMap:
    chosen = rng.sample(range(n), min(terminals, n))
    req = [0] * n
    for v in chosen:
        req[v] = rng.randint(1, max_req)
    return RequirementMap(tuple(req))


# -- deterministic fixtures -------------------------------------------------------


def grid(rows: int, cols: int, weights=None) -> EmbeddedMultigraph:
    """``rows x cols`` grid of vertices; vertex ``r*cols + c`` sits at ``(c, r)``."""
    pos = [(c, r) for r in range(rows) for c in range(cols)]
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return from_positions(len(pos), edges, pos, weights)


def cycle(n: int, weights=None) -> EmbeddedMultigraph:
    if n < 3:
        raise ValueError("simple cycles need at least 3 vertices")
    pos = [(math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n)) for i in range(n)]
    return from_positions(n, [(i, (i + 1) % n) for i in range(n)], pos, weights)


def path(n: int, weights=None) -> EmbeddedMultigraph:
    return from_positions(n, [(i, i + 1) for i in range(n - 1)], [(i, 0) for i in range(n)], weights)


def star(leaves: int, weights=None) -> EmbeddedMultigraph:
    """Centre 0 with leaves ``1..leaves``."""
    pos = [(0.0, 0.0)] + [
        (math.cos(2 * math.pi * i / leaves), math.sin(2 * math.pi * i / leaves)) for i in range(leaves)
    ]
    return from_positions(leaves + 1, [(0, i) for i in range(1, leaves + 1)], pos, weights)


def wheel(rim: int, weights=None) -> EmbeddedMultigraph:
    """Hub 0 joined to a rim cycle ``1..rim``; rim edges first, then spokes."""
    pos = [(0.0, 0.0)] + [
        (math.cos(2 * math.pi * i / rim), math.sin(2 * math.pi * i / rim)) for i in range(rim)
    ]
    edges = [(1 + i, 1 + (i + 1) % rim) for i in range(rim)]
    edges += [(0, i) for i in range(1, rim + 1)]
    return from_positions(rim + 1, edges, pos, weights)


def triangle(weights=None) -> EmbeddedMultigraph:
    return cycle(3, weights)


def k4(weights=None) -> EmbeddedMultigraph:
    """Triangle 0,1,2 with vertex 3 in the middle."""
    pos = [(0.0, 1.0), (-1.0, -0.8), (1.0, -0.8), (0.0, 0.0)]
    edges = [(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)]
    return from_positions(4, edges, pos, weights)


def octahedron(weights=None) -> EmbeddedMultigraph:
    """Antipodal pairs are (0,3), (1,4), (2,5)."""
    def at(deg, rad):
        return (rad * math.cos(math.radians(deg)), rad * math.sin(math.radians(deg)))

    pos = [at(90, 2), at(210, 2), at(330, 2), at(270, 0.7), at(30, 0.7), at(150, 0.7)]
    edges = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]
    edges += [(3, 1), (3, 2), (4, 0), (4, 2), (5, 0), (5, 1)]
    return from_positions(6, edges, pos, weights)


def theta(lengths: Sequence[int] = (2, 2, 2), weights=None) -> EmbeddedMultigraph:
    """Two poles 0 and 1 joined by internally disjoint paths of the given lengths.

    At most one path may have length 1.
    """
    if sum(1 for L in lengths if L == 1) > 1:
        raise ValueError("at most one direct pole edge")
    span = max(lengths)
    pos = [(0.0, 0.0), (float(span), 0.0)]
    edges = []
    offsets = iter([1, -1, 2, -2, 3, -3, 4, -4])
    for L in lengths:
        y = 0.0 if L == 1 else float(next(offsets))
        prev = 0
        for i in range(1, L):
            pos.append((span * i / L, y))
            v = len(pos) - 1
            edges.append((prev, v))
            prev = v
        edges.append((prev, 1))
    return from_positions(len(pos), edges, pos, weights)
