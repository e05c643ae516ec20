"""Mortar graph, bricks, boundary labelling and portals.

The mortar graph starts from an approximate Steiner tree of the terminals
and is refined by short paths: a face of the current mortar graph whose
boundary walk has an arc much longer than the distance between its ends
inside the face gets that shortest path added, splitting the face.  Faces
of the final mortar graph are the bricks.

Each brick boundary is labelled north/south/east/west.  The north side is
the heaviest subpath of the boundary walk that is a shortest path of the
whole graph, the south side the rest of the walk; east and west are left
empty (degenerate supercolumns of weight zero), so every boundary vertex,
terminals included, lies on north or south.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .graph import EmbeddedMultigraph, as_requirements, corner_of, face_regions
from .steiner import (
    DisconnectedTerminals,
    SteinerInstance,
    _adjacency,
    all_pairs_distances,
    approx_steiner,
    dijkstra,
    path_edges,
)

THETA_CAP = 16


def default_theta(eps) -> int:
    """Portals per brick: ``ceil(eps^-3)`` capped at 16."""
    eps = Fraction(eps)
    return max(1, min(THETA_CAP, math.ceil(1 / eps**3)))


def _check_eps(eps) -> Fraction:
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    return eps


# -- cut-open bricks -----------------------------------------------------------------------------


@dataclass
class Disk:
    """A brick cut open along its boundary walk.

    Boundary position ``i`` is the tail of walk dart ``i``; repeated visits
    of a vertex become distinct positions, so the boundary is a simple
    cycle and the brick a disk.  Interior vertices follow the positions.
    """

    n: int
    eu: list[int]
    ev: list[int]
    iw: list[int]
    g_edge: list[int]  # disk edge -> edge of g
    g_vertex: list[int]  # disk vertex -> vertex of g
    boundary_len: int

    @property
    def m(self) -> int:
        return len(self.eu)


def cut_open(g: EmbeddedMultigraph, sub: set[int], walk: Sequence[int], interior: set[int]) -> Disk:
    L = len(walk)
    g_vertex = [g.tail(d) for d in walk]
    at = {d: (i + 1) % L for i, d in enumerate(walk)}  # incoming dart -> corner position
    on_sub = set(g_vertex)
    inner_id: dict[int, int] = {}
    eu, ev, iw, g_edge = [], [], [], []
    for i, d in enumerate(walk):
        eu.append(i)
        ev.append((i + 1) % L)
        iw.append(g.iw[d >> 1])
        g_edge.append(d >> 1)

    def place(d):
        x = g.tail(d)
        if x in on_sub:
            c = corner_of(g, sub, d)
            if c not in at:
                raise ValueError("interior edge attaches outside this face")
            return at[c]
        if x not in inner_id:
            inner_id[x] = L + len(inner_id)
            g_vertex.append(x)
        return inner_id[x]

    for e in sorted(interior):
        eu.append(place(2 * e))
        ev.append(place(2 * e + 1))
        iw.append(g.iw[e])
        g_edge.append(e)
    return Disk(len(g_vertex), eu, ev, iw, g_edge, g_vertex, L)


# -- bricks ---------------------------------------------------------------------------------------


@dataclass
class Brick:
    id: int
    boundary: tuple[int, ...]  # darts of g, face walk of the mortar graph
    interior: frozenset
    north: tuple[int, ...] = ()
    south: tuple[int, ...] = ()
    east: tuple[int, ...] = ()
    west: tuple[int, ...] = ()
    north_start: int = 0  # walk position where the north side begins
    portals: tuple[int, ...] = ()
    portal_positions: tuple[int, ...] = ()

    def boundary_vertices(self, g: EmbeddedMultigraph) -> list[int]:
        return [g.tail(d) for d in self.boundary]

    def boundary_edges(self) -> set[int]:
        return {d >> 1 for d in self.boundary}

    def boundary_weight(self, g: EmbeddedMultigraph) -> Fraction:
        return Fraction(sum(g.iw[d >> 1] for d in self.boundary), g.scale)

    def edges(self) -> set[int]:
        return self.boundary_edges() | set(self.interior)


@dataclass
class MortarGraph:
    edges: frozenset
    weight: Fraction
    steiner_weight: Fraction
    epsilon: Fraction
    augmentations: int = 0
    stats: dict = field(default_factory=dict)

    @property
    def weight_bound_ratio(self) -> Fraction | None:
        if self.steiner_weight == 0:
            return None
        return self.weight / self.steiner_weight

    @property
    def bound_constant(self) -> Fraction:
        """Reference constant ``9/eps`` the achieved ratio is compared with."""
        return 9 / self.epsilon


def _violation(arc: int, d: int, eps: Fraction) -> bool:
    return arc * eps.denominator > (eps.denominator + eps.numerator) * d


def _fixable_violation(g, sub, walk, interior, eps):
    """Most local boundary arc that is not eps-short within its face and whose
    in-face shortest path uses an interior edge; returns g edges of that path."""
    disk = cut_open(g, sub, walk, interior)
    L = disk.boundary_len
    cum = [0]
    for d in walk:
        cum.append(cum[-1] + g.iw[d >> 1])
    total = cum[-1]
    adj = _adjacency(disk)
    runs = [dijkstra(disk, i, adj=adj) for i in range(L)]
    best = None
    for i in range(L):
        dist = runs[i][0]
        for step in range(1, L):
            j = (i + step) % L
            arc = cum[i + step] - cum[i] if i + step <= L else total - cum[i] + cum[(i + step) - L]
            dj = dist[j]
            if dj is None or not _violation(arc, dj, eps):
                continue
            key = (arc, step, i)
            if best is not None and key >= best[0]:
                break
            edges = path_edges(disk, runs[i][1], j)
            if any(e >= L for e in edges):
                best = (key, [disk.g_edge[e] for e in edges if e >= L])
                break
    return None if best is None else best[1]


def build_mortar(g: EmbeddedMultigraph, r, eps, max_rounds: int | None = None) -> MortarGraph:
    """Approximate Steiner tree of the terminals refined by in-face shortest paths."""
    eps = _check_eps(eps)
    r = as_requirements(r, g.n)
    terms = r.terminals
    if len(terms) <= 1:
        return MortarGraph(frozenset(), Fraction(0), Fraction(0), eps)
    tree = approx_steiner(SteinerInstance(g, tuple(terms)))
    sub = set(tree.edges)
    if max_rounds is None:
        max_rounds = g.m
    rounds = 0
    settled: set = set()
    while rounds < max_rounds:
        regions = face_regions(g, sub)
        added = None
        for f, inner in zip(regions.faces, regions.interior):
            if not inner:
                continue
            key = (f, frozenset(inner))
            if key in settled:
                continue
            path = _fixable_violation(g, sub, f, inner, eps)
            if path:
                added = path
                break
            settled.add(key)
        if added is None:
            break
        sub.update(added)
        rounds += 1
    mg = MortarGraph(frozenset(sub), g.weight(sub), tree.weight, eps, rounds)
    mg.stats["steiner_edges"] = sorted(tree.edges)
    return mg


def _label(g: EmbeddedMultigraph, walk: Sequence[int], dist) -> tuple[int, int]:
    """(start, length) of the heaviest simple walk subpath that is a shortest path in g."""
    L = len(walk)
    best = (0, 0, 0)  # (weight, length, -start)
    best_pos = (0, 0)
    for i in range(L):
        seen = {g.tail(walk[i])}
        w = 0
        for step in range(1, L + 1):
            d = walk[(i + step - 1) % L]
            w += g.iw[d >> 1]
            v = g.head(d)
            if v in seen or dist[g.tail(walk[i])][v] != w:
                break
            seen.add(v)
            key = (w, step, -i)
            if key > best:
                best, best_pos = key, (i, step)
    return best_pos


def extract_bricks(g: EmbeddedMultigraph, mg, dist=None) -> list[Brick]:
    """One brick per face of the mortar graph, labelled north/south."""
    edges = mg.edges if isinstance(mg, MortarGraph) else frozenset(mg)
    if not edges:
        return []
    regions = face_regions(g, edges)
    if dist is None:
        dist = all_pairs_distances(g)
    bricks = []
    for i, (f, inner) in enumerate(zip(regions.faces, regions.interior)):
        start, length = _label(g, f, dist)
        L = len(f)
        north = tuple(f[(start + t) % L] for t in range(length))
        south = tuple(f[(start + length + t) % L] for t in range(L - length))
        bricks.append(Brick(i, tuple(f), frozenset(inner), north, south, (), (), start))
    return bricks


# -- portals ---------------------------------------------------------------------------------------


def designate_portals(g: EmbeddedMultigraph, brick: Brick, theta: int) -> Brick:
    """At most ``theta`` portals spaced along the boundary walk.

    A portal is placed at the first walk position at or past each multiple
    of ``w(boundary) / theta``; every boundary vertex then has a portal at
    most that far behind it along the walk.
    """
    if theta < 1:
        raise ValueError("theta must be at least 1")
    walk = brick.boundary
    L = len(walk)
    verts = [g.tail(d) for d in walk]
    if theta >= L:
        positions = list(range(L))
    else:
        cum = [0]
        for d in walk:
            cum.append(cum[-1] + g.iw[d >> 1])
        total = cum[-1]
        positions = []
        i = 0
        for j in range(theta):
            # first position with cum * theta >= j * total
            while i < L and cum[i] * theta < j * total:
                i += 1
            if i < L and (not positions or positions[-1] != i):
                positions.append(i)
    portals = []
    for p in positions:
        if verts[p] not in portals:
            portals.append(verts[p])
    brick.portal_positions = tuple(positions)
    brick.portals = tuple(portals)
    return brick


def portal_gaps(g: EmbeddedMultigraph, brick: Brick) -> list[Fraction]:
    """For each boundary position, the lightest boundary subpath to a portal.

    Scans the walk both ways from every position; exhaustive by design.
    """
    walk = brick.boundary
    L = len(walk)
    if not brick.portals:
        return []
    portals = set(brick.portals)
    out = []
    for i in range(L):
        best = None
        for step in (1, -1):
            w = 0
            j = i
            for _ in range(L):
                if g.tail(walk[j]) in portals:
                    break
                if step == 1:
                    w += g.iw[walk[j] >> 1]
                    j = (j + 1) % L
                else:
                    j = (j - 1) % L
                    w += g.iw[walk[j] >> 1]
            best = w if best is None else min(best, w)
        out.append(Fraction(best, g.scale))
    return out


# -- property checks ----------------------------------------------------------------------------------


def _walk_pairs(g, darts):
    """(i, j, arc weight) for positions i < j on an open walk of ``darts``."""
    verts = [g.tail(darts[0])] + [g.head(d) for d in darts] if darts else []
    cum = [0]
    for d in darts:
        cum.append(cum[-1] + g.iw[d >> 1])
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            yield i, j, verts[i], verts[j], cum[j] - cum[i]


def is_zero_short(g: EmbeddedMultigraph, darts: Sequence[int], dist) -> bool:
    return all(arc == dist[x][y] for _, _, x, y, arc in _walk_pairs(g, darts))


def short_violations(g: EmbeddedMultigraph, darts: Sequence[int], dist, eps) -> list[tuple]:
    """Pairs on proper subpaths of ``darts`` that break eps-shortness.

    Pairs of positions holding the same vertex are skipped.
    """
    eps = Fraction(eps)
    n = len(darts)
    out = []
    for i, j, x, y, arc in _walk_pairs(g, darts):
        if i == 0 and j == n or x == y:
            continue
        if _violation(arc, dist[x][y], eps):
            out.append((i, j, x, y, Fraction(arc, g.scale), Fraction(dist[x][y], g.scale)))
    return out


@dataclass
class BrickCheck:
    brick: int
    boundary_weight: Fraction
    interior_edges: int
    north_weight: Fraction
    north_zero_short: bool
    south_violations: int
    terminals_on_ns: bool
    portal_count: int
    max_portal_gap: Fraction
    gap_bound: Fraction

    def as_json(self) -> dict:
        return {
            "brick": self.brick,
            "boundary_weight": str(self.boundary_weight),
            "interior_edges": self.interior_edges,
            "north_weight": str(self.north_weight),
            "north_zero_short": self.north_zero_short,
            "south_violations": self.south_violations,
            "terminals_on_north_south": self.terminals_on_ns,
            "portal_count": self.portal_count,
            "max_portal_gap": str(self.max_portal_gap),
            "portal_gap_bound": str(self.gap_bound),
        }


def check_brick(g: EmbeddedMultigraph, brick: Brick, r, eps, theta: int, dist) -> BrickCheck:
    r = as_requirements(r, g.n)
    ns = set()
    for side in (brick.north, brick.south):
        for d in side:
            ns.add(g.tail(d))
            ns.add(g.head(d))
    if not brick.north and not brick.south:
        ns = set(brick.boundary_vertices(g))
    on_boundary = set(brick.boundary_vertices(g))
    gaps = portal_gaps(g, brick)
    bw = brick.boundary_weight(g)
    return BrickCheck(
        brick=brick.id,
        boundary_weight=bw,
        interior_edges=len(brick.interior),
        north_weight=Fraction(sum(g.iw[d >> 1] for d in brick.north), g.scale),
        north_zero_short=is_zero_short(g, brick.north, dist),
        south_violations=len(short_violations(g, brick.south, dist, eps)),
        terminals_on_ns=all(v in ns for v in on_boundary if r[v] > 0),
        portal_count=len(brick.portal_positions),
        max_portal_gap=max(gaps, default=Fraction(0)),
        gap_bound=bw / theta,
    )


def interior_partition_ok(g: EmbeddedMultigraph, mg_edges, bricks: Sequence[Brick]) -> bool:
    """Brick interiors are disjoint and cover every edge outside the mortar graph."""
    seen = set()
    for b in bricks:
        if seen & b.interior or b.interior & set(mg_edges):
            return False
        seen |= b.interior
    return seen == set(range(g.m)) - set(mg_edges)


def brick_report(g, mg: MortarGraph, bricks, r, theta, dist=None) -> dict:
    if dist is None:
        dist = all_pairs_distances(g)
    checks = [check_brick(g, b, r, mg.epsilon, theta, dist) for b in bricks]
    ratio = mg.weight_bound_ratio
    return {
        "mortar_weight": str(mg.weight),
        "steiner_weight": str(mg.steiner_weight),
        "weight_ratio": None if ratio is None else str(ratio),
        "bound_constant": str(mg.bound_constant),
        "augmentations": mg.augmentations,
        "supercolumn_weight": "0",
        "interior_partition": interior_partition_ok(g, mg.edges, bricks),
        "bricks": [c.as_json() for c in checks],
    }


__all__ = [
    "Brick",
    "BrickCheck",
    "DisconnectedTerminals",
    "Disk",
    "MortarGraph",
    "brick_report",
    "build_mortar",
    "check_brick",
    "cut_open",
    "default_theta",
    "designate_portals",
    "extract_bricks",
    "interior_partition_ok",
    "is_zero_short",
    "portal_gaps",
    "short_violations",
]
