"""Slices of the spanner by dual BFS levels, artificial terminals, recombination.

Faces are levelled by breadth-first search in the dual from the largest
face.  For a shift ``o`` the cut levels are those ``l >= 1`` with
``l = o (mod eta)``; the shift with the lightest set of cut edges wins.
Slices are nested: each connected component (in the dual) of the faces at
or beyond a cut level is a region, and a slice is a region minus the deeper
regions inside it.  The parent of a region is the region of the previous
cut containing it, so the slices form a tree and a slice shares edges only
with its parent and its children, along the boundary of its region.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .connectivity import InfeasibleError, is_feasible, violated_pair
from .graph import EmbeddedMultigraph, MultiSolution, as_requirements

log = logging.getLogger(__name__)


class SlicingError(RuntimeError):
    """Slice structure is not a tree, or similar internal inconsistency."""


@dataclass
class Slice:
    id: int
    edges: frozenset  # edge ids of the sliced graph
    parent: int | None = None
    boundary: frozenset = frozenset()  # edges shared with the parent
    boundary_cycles: list = field(default_factory=list)  # vertex cycles shared with neighbours
    artificial_terminals: dict = field(default_factory=dict)  # vertex -> requirement
    window: int = 0

    def vertices(self, g: EmbeddedMultigraph) -> set[int]:
        out = set()
        for e in self.edges:
            out.add(g.eu[e])
            out.add(g.ev[e])
        return out


@dataclass
class SliceResult:
    slices: list[Slice]
    offset: int
    eta: int
    levels: list[int]  # per face
    root_face: int
    offset_weights: list[Fraction]
    boundary_weight: Fraction
    stats: dict = field(default_factory=dict)


def dual_levels(g: EmbeddedMultigraph) -> tuple[list[int], int]:
    """BFS levels of faces from the largest face (most darts, then lowest index)."""
    faces = g.faces()
    if not faces:
        return [], -1
    root = max(range(len(faces)), key=lambda f: (len(faces[f]), -f))
    adj: list[set[int]] = [set() for _ in faces]
    for e in range(g.m):
        a, b = g.face_of(2 * e), g.face_of(2 * e + 1)
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    level = [-1] * len(faces)
    level[root] = 0
    q = deque([root])
    while q:
        f = q.popleft()
        for h in sorted(adj[f]):
            if level[h] < 0:
                level[h] = level[f] + 1
                q.append(h)
    return level, root


def _cut_weight(g, level, cuts) -> int:
    w = 0
    for e in range(g.m):
        a, b = level[g.face_of(2 * e)], level[g.face_of(2 * e + 1)]
        if a != b and max(a, b) in cuts:
            w += g.iw[e]
    return w


def _components(g, faces_in: set[int]) -> list[set[int]]:
    adj: dict[int, set[int]] = {f: set() for f in faces_in}
    for e in range(g.m):
        a, b = g.face_of(2 * e), g.face_of(2 * e + 1)
        if a != b and a in faces_in and b in faces_in:
            adj[a].add(b)
            adj[b].add(a)
    out = []
    seen = set()
    for f in sorted(faces_in):
        if f in seen:
            continue
        comp = {f}
        stack = [f]
        seen.add(f)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        out.append(comp)
    return out


def boundary_walks(g: EmbeddedMultigraph, edges: set[int]) -> list[list[int]]:
    """Vertex cycles formed by ``edges`` when every vertex has even degree in them;
    otherwise the edge set is returned as one open list of vertices."""
    inc: dict[int, list[int]] = {}
    for e in sorted(edges):
        inc.setdefault(g.eu[e], []).append(e)
        inc.setdefault(g.ev[e], []).append(e)
    used = set()
    walks = []
    for v0 in sorted(inc):
        for e0 in inc[v0]:
            if e0 in used:
                continue
            walk = [v0]
            v, e = v0, e0
            while e is not None and e not in used:
                used.add(e)
                v = g.ev[e] if g.eu[e] == v else g.eu[e]
                walk.append(v)
                e = next((x for x in inc[v] if x not in used), None)
            walks.append(walk)
    return walks


def slice_graph(g: EmbeddedMultigraph, eta: int, offset: int | None = None) -> SliceResult:
    """Baker-style slices of ``g`` with ``eta`` dual levels per slice."""
    if eta < 2:
        raise ValueError("eta must be at least 2")
    level, root = dual_levels(g)
    if root < 0:
        return SliceResult([Slice(0, frozenset())], 0, eta, [], -1, [Fraction(0)], Fraction(0))
    maxl = max(level)
    weights = []
    for o in range(eta):
        cuts = {l for l in range(1, maxl + 1) if (l - o) % eta == 0}
        weights.append(_cut_weight(g, level, cuts))
    if offset is None:
        offset = min(range(eta), key=lambda o: (weights[o], o))
    cuts = sorted(l for l in range(1, maxl + 1) if (l - offset) % eta == 0)

    def window(l):
        return sum(1 for c in cuts if c <= l)

    nf = len(level)
    win = [window(level[f]) for f in range(nf)]
    # regions per window, nested
    regions = [(0, set(range(nf)), None)]  # (window, faces, parent region index)
    region_of_face = {f: 0 for f in range(nf)}  # deepest region containing f so far
    for j in range(1, len(cuts) + 1):
        deep = {f for f in range(nf) if win[f] >= j}
        for comp in _components(g, deep):
            parents = {region_of_face[f] for f in comp}
            if len(parents) != 1:
                raise SlicingError("region straddles two parent regions")
            idx = len(regions)
            regions.append((j, comp, parents.pop()))
            for f in comp:
                region_of_face[f] = idx
    slices = []
    for idx, (j, faces_r, parent) in enumerate(regions):
        own = {f for f in faces_r if region_of_face[f] == idx}
        edges = set()
        boundary = set()
        for e in range(g.m):
            a, b = g.face_of(2 * e), g.face_of(2 * e + 1)
            if a in own or b in own:
                edges.add(e)
            if parent is not None and (a in faces_r) != (b in faces_r):
                boundary.add(e)
        slices.append(Slice(idx, frozenset(edges), parent, frozenset(boundary), window=j))
    for s in slices:
        if s.parent is not None:
            s.boundary_cycles = boundary_walks(g, set(s.boundary))
    bw = Fraction(weights[offset], g.scale)
    res = SliceResult(
        slices,
        offset,
        eta,
        level,
        root,
        [Fraction(w, g.scale) for w in weights],
        bw,
    )
    res.stats = slice_stats(g, res)
    return res


def slice_stats(g: EmbeddedMultigraph, res: SliceResult) -> dict:
    owners: dict[int, int] = {}
    for s in res.slices:
        for e in s.edges:
            owners[e] = owners.get(e, 0) + 1
    shared = {e for e, c in owners.items() if c == 2}
    boundary = set()
    for s in res.slices:
        boundary |= s.boundary
    simple = []
    for s in res.slices:
        if s.parent is None:
            continue
        deg: dict[int, int] = {}
        for e in s.boundary:
            for x in (g.eu[e], g.ev[e]):
                deg[x] = deg.get(x, 0) + 1
        simple.append(len(s.boundary) > 0 and all(d == 2 for d in deg.values()) and len(s.boundary_cycles) == 1)
    return {
        "slices": len(res.slices),
        "max_owners": max(owners.values(), default=0),
        "covered": len(owners) == g.m,
        "shared_equals_boundary": shared == boundary,
        "simple_boundaries": sum(simple),
        "nonsimple_boundaries": len(simple) - sum(simple),
    }


def is_tree(slices: Sequence[Slice]) -> bool:
    roots = [s for s in slices if s.parent is None]
    if len(roots) != 1:
        return False
    ids = {s.id for s in slices}
    for s in slices:
        seen = set()
        x = s
        while x.parent is not None:
            if x.id in seen or x.parent not in ids:
                return False
            seen.add(x.id)
            x = slices[x.parent]
    return True


def _subtree_edges(slices: Sequence[Slice]) -> dict[int, set[int]]:
    children: dict[int, list[int]] = {s.id: [] for s in slices}
    for s in slices:
        if s.parent is not None:
            children[s.parent].append(s.id)
    out: dict[int, set[int]] = {}

    def collect(i):
        acc = set(slices[i].edges)
        for c in children[i]:
            acc |= collect(c)
        out[i] = acc
        return acc

    for s in slices:
        if s.parent is None:
            collect(s.id)
    return out


def assign_artificial_terminals(g: EmbeddedMultigraph, slices: Sequence[Slice], r) -> list[Slice]:
    """Put one terminal on each boundary that separates terminals.

    The minimum-id boundary vertex gets requirement
    ``min(max r strictly inside, max r strictly outside)``; nothing is added
    when either side has no terminal.  The terminal is recorded in the slice
    and in its parent.
    """
    r = as_requirements(r, g.n)
    if not is_tree(slices):
        raise SlicingError("slices do not form a tree")
    sub = _subtree_edges(slices)
    all_edges = set(range(g.m))
    for s in slices:
        s.artificial_terminals = {}
    for s in slices:
        if s.parent is None or not s.boundary:
            continue
        on = set()
        for e in s.boundary:
            on.add(g.eu[e])
            on.add(g.ev[e])
        inside = set()
        for e in sub[s.id]:
            inside.add(g.eu[e])
            inside.add(g.ev[e])
        outside = set()
        for e in all_edges - sub[s.id]:
            outside.add(g.eu[e])
            outside.add(g.ev[e])
        inside -= on
        outside -= on
        rin = max((r[v] for v in inside), default=0)
        rout = max((r[v] for v in outside), default=0)
        need = min(rin, rout)
        if need > 0:
            v = min(on)
            for t in (s, slices[s.parent]):
                t.artificial_terminals[v] = max(need, t.artificial_terminals.get(v, 0))
    return list(slices)


def slice_requirements(g: EmbeddedMultigraph, s: Slice, r) -> list[int]:
    """Original requirements of the slice's vertices, raised by its artificial terminals."""
    r = as_requirements(r, g.n)
    verts = s.vertices(g)
    req = [r[v] if v in verts else 0 for v in range(g.n)]
    for v, a in s.artificial_terminals.items():
        req[v] = max(req[v], a)
    return req


def recombine(
    g: EmbeddedMultigraph,
    parts: Sequence[dict[int, int]],
    r,
    k: int = 3,
) -> tuple[MultiSolution, str]:
    """Union of per-slice solutions, ``max`` multiplicity on shared edges.

    Falls back to summing (capped at ``k``) if the max-union is infeasible.
    Returns the solution and the rule used; raises with the violated pair
    when neither works.
    """
    r = as_requirements(r, g.n)
    vec = [0] * g.m
    for part in parts:
        for e, c in part.items():
            vec[e] = max(vec[e], c)
    if is_feasible(g, vec, r):
        return MultiSolution.from_vector(vec, k), "max"
    log.warning("max-union of slice solutions infeasible, escalating to sum")
    vec = [0] * g.m
    for part in parts:
        for e, c in part.items():
            vec[e] = min(k, vec[e] + c)
    if is_feasible(g, vec, r):
        return MultiSolution.from_vector(vec, k), "sum"
    u, v, need, have = violated_pair(g, vec, r)
    raise InfeasibleError(f"recombined solution gives {have} < {need} paths between {u} and {v}")


__all__ = [
    "Slice",
    "SliceResult",
    "SlicingError",
    "assign_artificial_terminals",
    "boundary_walks",
    "dual_levels",
    "is_tree",
    "recombine",
    "slice_graph",
    "slice_requirements",
]
