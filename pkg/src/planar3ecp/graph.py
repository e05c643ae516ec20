"""Embedded planar multigraphs given by a rotation system.

Darts are numbered from edges: dart ``2*e`` runs ``eu[e] -> ev[e]`` and dart
``2*e + 1`` runs back, so ``twin(d) == d ^ 1``.  The rotation at a vertex is
the counterclockwise cyclic order of the darts leaving it.  Faces are the
orbits of ``d -> next_at_vertex(twin(d))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence


class EmbeddingError(ValueError):
    """Raised for malformed rotation systems or non-planar embeddings."""


class Dart(NamedTuple):
    id: int
    head: int
    twin: int
    next_at_vertex: int


def _fraction(w) -> Fraction:
    if isinstance(w, float):
        raise TypeError("weights must be exact (int, Fraction or 'p/q' string), got float")
    f = Fraction(w)
    if f < 0:
        raise EmbeddingError(f"negative edge weight {w}")
    return f


class EmbeddedMultigraph:
    """Immutable embedded multigraph with exact nonnegative edge weights.

    ``rotation[v]`` lists dart ids leaving ``v`` in counterclockwise order.
    Construction validates the rotation system and Euler's formula on every
    connected component; use :func:`build` for the edge-id flavoured input
    used by the text format.
    """

    def __init__(
        self,
        n: int,
        edges: Sequence[tuple[int, int]],
        rotation: Sequence[Sequence[int]],
        weights: Sequence | None = None,
        *,
        allow_loops: bool = False,
        parent_edge: Sequence[int] | None = None,
    ):
        self.n = int(n)
        self.m = len(edges)
        self.eu = tuple(int(u) for u, _ in edges)
        self.ev = tuple(int(v) for _, v in edges)
        if weights is None:
            weights = [1] * self.m
        if len(weights) != self.m:
            raise EmbeddingError("one weight per edge required")
        self.weights = tuple(_fraction(w) for w in weights)
        self.scale = math.lcm(*(w.denominator for w in self.weights)) if self.m else 1
        # integer weights scaled by ``scale``; algorithms work on these
        self.iw = tuple(int(w * self.scale) for w in self.weights)
        self.rotation = tuple(tuple(int(d) for d in rot) for rot in rotation)
        self.parent_edge = tuple(parent_edge) if parent_edge is not None else tuple(range(self.m))
        self._faces: list[tuple[int, ...]] | None = None
        self._face_of: list[int] | None = None
        self._validate(allow_loops)

    # -- validation -----------------------------------------------------

    def _validate(self, allow_loops: bool) -> None:
        n, m = self.n, self.m
        if len(self.rotation) != n:
            raise EmbeddingError(f"expected {n} rotation lists, got {len(self.rotation)}")
        for e in range(m):
            u, v = self.eu[e], self.ev[e]
            if not (0 <= u < n and 0 <= v < n):
                raise EmbeddingError(f"edge {e} has endpoint outside 0..{n - 1}")
            if u == v and not allow_loops:
                raise EmbeddingError(f"self-loop at vertex {u} (edge {e})")
        seen = [False] * (2 * m)
        nxt = [-1] * (2 * m)
        prv = [-1] * (2 * m)
        for v, rot in enumerate(self.rotation):
            for i, d in enumerate(rot):
                if not 0 <= d < 2 * m:
                    raise EmbeddingError(f"unknown dart {d} at vertex {v}")
                if seen[d]:
                    raise EmbeddingError(f"dart {d} listed twice")
                if self.tail(d) != v:
                    raise EmbeddingError(f"dart {d} does not leave vertex {v}")
                seen[d] = True
                nxt[d] = rot[(i + 1) % len(rot)]
                prv[d] = rot[i - 1]
        if not all(seen):
            missing = seen.index(False)
            raise EmbeddingError(f"dart {missing} missing from the rotation system")
        self._next = tuple(nxt)
        self._prev = tuple(prv)
        comp = self.component_labels()
        faces = self.faces()
        counts: dict[int, list[int]] = {}
        for v in range(n):
            counts.setdefault(comp[v], [0, 0, 0])[0] += 1
        for e in range(m):
            counts[comp[self.eu[e]]][1] += 1
        for f in faces:
            counts[comp[self.tail(f[0])]][2] += 1
        for c, (nv, ne, nf) in counts.items():
            if ne == 0:
                nf = 1
            if nv - ne + nf != 2:
                raise EmbeddingError(
                    f"Euler check failed on component of vertex {c}: V-E+F = {nv}-{ne}+{nf}"
                )

    # -- darts ------------------------------------------------------------

    @staticmethod
    def twin(d: int) -> int:
        return d ^ 1

    def tail(self, d: int) -> int:
        return self.eu[d >> 1] if d % 2 == 0 else self.ev[d >> 1]

    def head(self, d: int) -> int:
        return self.ev[d >> 1] if d % 2 == 0 else self.eu[d >> 1]

    def next_at_vertex(self, d: int) -> int:
        return self._next[d]

    def prev_at_vertex(self, d: int) -> int:
        return self._prev[d]

    def dart(self, d: int) -> Dart:
        return Dart(d, self.head(d), d ^ 1, self._next[d])

    def face_next(self, d: int) -> int:
        return self._next[d ^ 1]

    # -- faces ------------------------------------------------------------

    def faces(self) -> list[tuple[int, ...]]:
        """Face cycles as dart tuples, each starting at its smallest dart."""
        if self._faces is None:
            face_of = [-1] * (2 * self.m)
            faces = []
            for start in range(2 * self.m):
                if face_of[start] != -1:
                    continue
                cyc = []
                d = start
                while face_of[d] == -1:
                    face_of[d] = len(faces)
                    cyc.append(d)
                    d = self._next[d ^ 1]
                faces.append(tuple(cyc))
            self._faces = faces
            self._face_of = face_of
        return self._faces

    def face_of(self, d: int) -> int:
        self.faces()
        return self._face_of[d]

    def face_vertices(self, f: int) -> list[int]:
        return [self.tail(d) for d in self.faces()[f]]

    # -- structure --------------------------------------------------------

    def incident_darts(self, v: int) -> tuple[int, ...]:
        return self.rotation[v]

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def neighbors(self, v: int) -> list[int]:
        return [self.head(d) for d in self.rotation[v]]

    def endpoints(self, e: int) -> tuple[int, int]:
        return self.eu[e], self.ev[e]

    def component_labels(self) -> list[int]:
        """Label each vertex by the smallest vertex id of its component."""
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in zip(self.eu, self.ev):
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
        return [find(v) for v in range(self.n)]

    def is_connected(self, vertices: Iterable[int] | None = None) -> bool:
        labels = self.component_labels()
        vs = range(self.n) if vertices is None else vertices
        return len({labels[v] for v in vs}) <= 1

    def weight(self, edges) -> Fraction:
        """Weight of an edge collection; mappings are read as multiplicities."""
        if isinstance(edges, Mapping):
            total = sum(self.iw[e] * k for e, k in edges.items())
        else:
            total = sum(self.iw[e] for e in edges)
        return Fraction(total, self.scale)

    def total_weight(self) -> Fraction:
        return Fraction(sum(self.iw), self.scale)

    def edge_rotation(self, v: int) -> list[int]:
        return [d >> 1 for d in self.rotation[v]]

    # -- derived graphs -----------------------------------------------------

    def subgraph(self, edge_ids: Iterable[int]) -> "EmbeddedMultigraph":
        """Restriction to ``edge_ids`` on the same vertex set.

        Edges are renumbered in increasing original id; ``parent_edge`` maps
        back to this graph's edge ids.
        """
        keep = sorted(set(edge_ids))
        new_id = {e: i for i, e in enumerate(keep)}
        edges = [(self.eu[e], self.ev[e]) for e in keep]
        rotation = []
        for v in range(self.n):
            rot = []
            for d in self.rotation[v]:
                e = d >> 1
                if e in new_id:
                    rot.append(2 * new_id[e] + (d & 1))
            rotation.append(rot)
        parents = [self.parent_edge[e] for e in keep]
        return EmbeddedMultigraph(
            self.n,
            edges,
            rotation,
            [self.weights[e] for e in keep],
            allow_loops=True,
            parent_edge=parents,
        )

    def detached(self) -> "EmbeddedMultigraph":
        """Copy whose ``parent_edge`` is the identity."""
        return EmbeddedMultigraph(
            self.n,
            list(zip(self.eu, self.ev)),
            self.rotation,
            self.weights,
            allow_loops=True,
        )

    def local_edges(self, parent_ids: Iterable[int]) -> list[int]:
        """Translate parent edge ids to this graph's edge ids (missing ids dropped)."""
        index = {p: i for i, p in enumerate(self.parent_edge)}
        return [index[p] for p in parent_ids if p in index]

    def dual(self) -> "EmbeddedMultigraph":
        """Face-vertex dual; dual edge ``e`` crosses primal edge ``e``."""
        if not self.is_connected([v for v in range(self.n) if self.degree(v)]):
            raise EmbeddingError("dual requires a connected embedding")
        faces = self.faces()
        edges = [(self.face_of(2 * e), self.face_of(2 * e + 1)) for e in range(self.m)]
        return EmbeddedMultigraph(len(faces), edges, faces, self.weights, allow_loops=True)

    def __eq__(self, other):
        if not isinstance(other, EmbeddedMultigraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.eu == other.eu
            and self.ev == other.ev
            and self.weights == other.weights
            and self.rotation == other.rotation
        )

    def __hash__(self):
        return hash((self.n, self.eu, self.ev, self.weights, self.rotation))

    def __repr__(self):
        return f"EmbeddedMultigraph(n={self.n}, m={self.m}, faces={len(self.faces())})"


def build(
    n: int,
    edges: Sequence[tuple[int, int]],
    rotation: Sequence[Sequence[int]],
    weights: Sequence | None = None,
) -> EmbeddedMultigraph:
    """Build from per-vertex rotations given as edge ids (counterclockwise).

    Without self-loops an edge id names exactly one dart at each endpoint.
    """
    darts = []
    for v, rot in enumerate(rotation):
        row = []
        for e in rot:
            if not 0 <= e < len(edges):
                raise EmbeddingError(f"unknown edge {e} in rotation of {v}")
            u, w = edges[e]
            if u == w:
                raise EmbeddingError(f"self-loop at vertex {u} (edge {e})")
            if u == v:
                row.append(2 * e)
            elif w == v:
                row.append(2 * e + 1)
            else:
                raise EmbeddingError(f"edge {e} is not incident to vertex {v}")
        darts.append(row)
    return EmbeddedMultigraph(n, edges, darts, weights)


def from_positions(
    n: int,
    edges: Sequence[tuple[int, int]],
    pos: Sequence[tuple[float, float]],
    weights: Sequence | None = None,
) -> EmbeddedMultigraph:
    """Embed a straight-line drawing: rotations sorted by angle.

    Parallel edges between the same pair stay adjacent, ordered by edge id.
    """
    rotation: list[list[tuple[float, int]]] = [[] for _ in range(n)]
    for e, (u, v) in enumerate(edges):
        for a, b, d in ((u, v, 2 * e), (v, u, 2 * e + 1)):
            ang = math.atan2(pos[b][1] - pos[a][1], pos[b][0] - pos[a][0])
            rotation[a].append((ang, e, d))
    rot = []
    for v in range(n):
        rot.append([d for _, _, d in sorted(rotation[v])])
    return EmbeddedMultigraph(n, edges, rot, weights)


# -- requirements and solutions ----------------------------------------------


@dataclass(frozen=True)
class RequirementMap:
    """Vertex requirements in {0,1,2,3}; positive entries are terminals."""

    req: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "req", tuple(int(r) for r in self.req))
        for v, r in enumerate(self.req):
            if r not in (0, 1, 2, 3):
                raise ValueError(f"requirement of vertex {v} must be in 0..3, got {r}")

    @classmethod
    def from_dict(cls, n: int, req: Mapping[int, int]) -> "RequirementMap":
        vals = [0] * n
        for v, r in req.items():
            vals[v] = r
        return cls(tuple(vals))

    def __getitem__(self, v: int) -> int:
        return self.req[v]

    def __len__(self) -> int:
        return len(self.req)

    def __iter__(self):
        return iter(self.req)

    @property
    def terminals(self) -> list[int]:
        return [v for v, r in enumerate(self.req) if r > 0]

    @property
    def max_req(self) -> int:
        return max(self.req, default=0)


def as_requirements(r, n: int | None = None) -> RequirementMap:
    if isinstance(r, RequirementMap):
        return r
    if isinstance(r, Mapping):
        if n is None:
            raise ValueError("vertex count needed to expand a requirement dict")
        return RequirementMap.from_dict(n, r)
    return RequirementMap(tuple(r))


@dataclass
class MultiSolution:
    """Edge multiplicities in 0..k; missing edges have multiplicity 0."""

    mult: dict[int, int] = field(default_factory=dict)
    k: int = 3

    def __post_init__(self):
        clean = {}
        for e, c in self.mult.items():
            c = int(c)
            if not 0 <= c <= self.k:
                raise ValueError(f"multiplicity {c} of edge {e} outside 0..{self.k}")
            if c:
                clean[int(e)] = c
        self.mult = dict(sorted(clean.items()))

    def weight(self, g: EmbeddedMultigraph) -> Fraction:
        return g.weight(self.mult)

    def edges(self) -> list[int]:
        return list(self.mult)

    def copies(self) -> int:
        return sum(self.mult.values())

    def get(self, e: int) -> int:
        return self.mult.get(e, 0)

    def vector(self, m: int) -> tuple[int, ...]:
        return tuple(self.mult.get(e, 0) for e in range(m))

    @classmethod
    def from_vector(cls, vec: Sequence[int], k: int = 3) -> "MultiSolution":
        return cls({e: c for e, c in enumerate(vec) if c}, k)


# -- regions enclosed by faces of a subgraph -------------------------------------


def restricted_next(g: EmbeddedMultigraph, sub: set[int]) -> dict[int, int]:
    """Rotation successor among darts of the edge set ``sub``."""
    nxt = {}
    for v in range(g.n):
        rot = [d for d in g.rotation[v] if (d >> 1) in sub]
        for i, d in enumerate(rot):
            nxt[d] = rot[(i + 1) % len(rot)]
    return nxt


def subgraph_faces(g: EmbeddedMultigraph, sub_edges: Iterable[int]) -> list[tuple[int, ...]]:
    """Faces of the sub-embedding on ``sub_edges``, as cycles of g's darts."""
    sub = set(sub_edges)
    nxt = restricted_next(g, sub)
    seen = set()
    faces = []
    for start in sorted(nxt):
        if start in seen:
            continue
        cyc = []
        d = start
        while d not in seen:
            seen.add(d)
            cyc.append(d)
            d = nxt[d ^ 1]
        faces.append(tuple(cyc))
    return faces


def corner_of(g: EmbeddedMultigraph, sub: set[int], d: int) -> int:
    """Incoming boundary dart of the corner holding dart ``d`` (tail on the subgraph).

    The corner after incoming dart ``c`` at ``head(c)`` contains the darts met
    when rotating forward from ``twin(c)``.
    """
    h = g.prev_at_vertex(d)
    while (h >> 1) not in sub:
        if h == d:
            raise ValueError("vertex has no subgraph darts")
        h = g.prev_at_vertex(h)
    return h ^ 1


@dataclass
class FaceRegions:
    faces: list[tuple[int, ...]]
    interior: list[set[int]]
    unassigned: set[int]
    face_of_dart: dict[int, int]


def face_regions(g: EmbeddedMultigraph, sub_edges: Iterable[int]) -> FaceRegions:
    """Faces of a subgraph and the edges of ``g`` lying strictly inside each.

    Edges off the subgraph are grouped into pieces joined at vertices that
    the subgraph does not touch; a piece lies in the face owning the corner
    where it attaches.
    """
    sub = set(sub_edges)
    faces = subgraph_faces(g, sub)
    face_of_dart = {d: i for i, f in enumerate(faces) for d in f}
    on_sub = [False] * g.n
    for e in sub:
        on_sub[g.eu[e]] = on_sub[g.ev[e]] = True
    interior: list[set[int]] = [set() for _ in faces]
    assigned = set()
    unassigned = set()
    for e0 in range(g.m):
        if e0 in sub or e0 in assigned:
            continue
        piece = {e0}
        stack = [e0]
        target = None
        while stack:
            e = stack.pop()
            for d in (2 * e, 2 * e + 1):
                v = g.tail(d)
                if on_sub[v]:
                    f = face_of_dart[corner_of(g, sub, d)]
                    if target is None:
                        target = f
                    elif target != f:
                        raise EmbeddingError("piece attaches to two faces; embedding inconsistent")
                    continue
                for d2 in g.rotation[v]:
                    e2 = d2 >> 1
                    if e2 not in piece:
                        piece.add(e2)
                        stack.append(e2)
        assigned |= piece
        if target is None:
            unassigned |= piece
        else:
            interior[target] |= piece
    return FaceRegions(faces, interior, unassigned, face_of_dart)


def _same_cycle(a: Sequence[int], b: Sequence[int]) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    try:
        i = list(b).index(a[0])
    except ValueError:
        return False
    return all(a[j] == b[(i + j) % len(b)] for j in range(len(a)))


def enclosed_subgraph(
    g: EmbeddedMultigraph, h_edges: Iterable[int], cycle: Sequence[int]
) -> EmbeddedMultigraph:
    """Subgraph of ``g`` enclosed by a face of the subgraph ``h_edges``.

    ``cycle`` is the face as a cycle of g's darts; the result holds the
    boundary edges and every edge strictly inside.
    """
    regions = face_regions(g, h_edges)
    for i, f in enumerate(regions.faces):
        if _same_cycle(list(cycle), f):
            boundary = {d >> 1 for d in f}
            return g.subgraph(boundary | regions.interior[i])
    raise EmbeddingError("cycle is not a face of the given subgraph")


def augment_parallel(g: EmbeddedMultigraph, k: int) -> EmbeddedMultigraph:
    """Replace every edge by ``k`` parallel copies of the same weight.

    Copy ``i`` of edge ``e`` gets id ``e*k + i`` and ``parent_edge`` ``e``.
    Copies sit consecutively in each rotation, reversed at the far end so
    that consecutive copies bound digon faces.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if k == 1:
        return g
    edges = [(g.eu[e], g.ev[e]) for e in range(g.m) for _ in range(k)]
    rotation = []
    for v in range(g.n):
        row = []
        for d in g.rotation[v]:
            e, side = d >> 1, d & 1
            copies = [2 * (e * k + i) + side for i in range(k)]
            row.extend(copies if side == 0 else copies[::-1])
        rotation.append(row)
    weights = [g.weights[e] for e in range(g.m) for _ in range(k)]
    parents = [g.parent_edge[e] for e in range(g.m) for _ in range(k)]
    return EmbeddedMultigraph(g.n, edges, rotation, weights, parent_edge=parents)
