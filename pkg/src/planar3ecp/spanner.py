"""Spanner: mortar graph plus optimal in-brick trees over every portal subset."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graph import EmbeddedMultigraph, as_requirements
from .mortar import (
    Brick,
    MortarGraph,
    build_mortar,
    cut_open,
    default_theta,
    designate_portals,
    extract_bricks,
)
from .steiner import boundary_steiner_all, prune_tree

# dp cells (subsets x disk vertices) the subset DP may allocate per brick
MEMORY_BUDGET = 1 << 22


@dataclass
class Spanner:
    edges: frozenset
    mortar: frozenset
    trees: dict  # (brick id, portal bitmask) -> tuple of g edges
    stats: dict = field(default_factory=dict)

    def graph(self, g: EmbeddedMultigraph) -> EmbeddedMultigraph:
        """Subgraph of ``g`` on the spanner edges (same vertex ids)."""
        return g.subgraph(sorted(self.edges))


def brick_trees(g: EmbeddedMultigraph, mortar_edges, brick: Brick, budget: int = MEMORY_BUDGET):
    """Optimal trees for every subset of at least two portals of ``brick``.

    Returns ``(trees, used_positions)``; trees heavier than the brick
    boundary are dropped.  If the subset table would exceed ``budget``
    cells, the portal list is thinned to fit and the thinning is visible
    in ``used_positions``.
    """
    if not brick.interior or len(brick.portal_positions) < 2:
        return {}, brick.portal_positions
    disk = cut_open(g, set(mortar_edges), brick.boundary, set(brick.interior))
    positions = list(brick.portal_positions)
    while len(positions) > 2 and (1 << len(positions)) * disk.n > budget:
        positions = positions[::2]
    cost, trees = boundary_steiner_all(disk.n, disk.eu, disk.ev, disk.iw, positions)
    bound = sum(g.iw[d >> 1] for d in brick.boundary)
    keep_vertices = [disk.g_vertex[p] for p in positions]
    out = {}
    for mask in range(1, 1 << len(positions)):
        if mask & (mask - 1) == 0 or cost[mask] < 0 or cost[mask] > bound:
            continue
        edges = {disk.g_edge[e] for e in trees[mask]}
        sub = [keep_vertices[i] for i in range(len(positions)) if mask >> i & 1]
        out[mask] = tuple(prune_tree(g, edges, sub))
    return out, tuple(positions)


def build_spanner(
    g: EmbeddedMultigraph,
    mg: MortarGraph,
    bricks: list[Brick],
    r=None,
    budget: int = MEMORY_BUDGET,
) -> Spanner:
    edges = set(mg.edges)
    trees = {}
    thinned = 0
    distinct = set()
    for b in bricks:
        ts, used = brick_trees(g, mg.edges, b, budget)
        if len(used) < len(b.portal_positions):
            thinned += 1
        for mask, es in ts.items():
            trees[(b.id, mask)] = es
            distinct.add(es)
            edges.update(es)
    w = g.weight(edges)
    stats = {
        "mortar_weight": mg.weight,
        "spanner_weight": w,
        "steiner_weight": mg.steiner_weight,
        "ratio": None if mg.steiner_weight == 0 else w / mg.steiner_weight,
        "bricks": len(bricks),
        "trees": len(trees),
        "distinct_trees": len(distinct),
        "bricks_thinned": thinned,
        "boundary_weight_total": sum((b.boundary_weight(g) for b in bricks), Fraction(0)),
    }
    return Spanner(frozenset(edges), frozenset(mg.edges), trees, stats)


def spanner_for(g: EmbeddedMultigraph, r, eps, theta: int | None = None):
    """Mortar graph, bricks with portals, and spanner in one call."""
    r = as_requirements(r, g.n)
    mg = build_mortar(g, r, eps)
    bricks = extract_bricks(g, mg)
    th = default_theta(eps) if theta is None else theta
    for b in bricks:
        designate_portals(g, b, th)
    sp = build_spanner(g, mg, bricks, r)
    sp.stats["theta"] = th
    return mg, bricks, sp
