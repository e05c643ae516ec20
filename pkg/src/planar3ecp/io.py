"""Text formats: graphs, solutions and spanners.

Graph file::

    planar-graph v1
    vertices 4
    rot 0: 0 5 3
    ...
    edge 0 0 1 1
    edge 1 1 2 3/2
    req 0 3

``rot`` lines list dart ids (dart ``2e`` leaves ``eu[e]``, ``2e+1`` leaves
``ev[e]``) in counterclockwise order.  The writer is canonical, so
``write_graph(read_graph(text)) == text`` for any file it produced.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .graph import EmbeddedMultigraph, EmbeddingError, MultiSolution, RequirementMap

HEADER = "planar-graph v1"


class FormatError(ValueError):
    pass


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _parse_weight(tok: str, lineno: int) -> Fraction:
    try:
        if "/" in tok:
            num, den = tok.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(tok))
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"line {lineno}: bad weight {tok!r}") from exc


def _format_weight(w: Fraction) -> str:
    return str(w.numerator) if w.denominator == 1 else f"{w.numerator}/{w.denominator}"


def parse_graph_lines(lines, *, extra=None) -> tuple[EmbeddedMultigraph, RequirementMap]:
    """Parse tokenised graph lines; unknown keywords go to ``extra(lineno, line)``."""
    lines = list(lines)
    if not lines or lines[0][1] != HEADER:
        raise FormatError(f"missing header {HEADER!r}")
    n = None
    rot: dict[int, list[int]] = {}
    edges: dict[int, tuple[int, int, Fraction]] = {}
    req: dict[int, int] = {}
    for lineno, line in lines[1:]:
        key = line.split(None, 1)[0]
        try:
            if key == "vertices":
                n = int(line.split()[1])
                if n < 0:
                    raise FormatError(f"line {lineno}: negative vertex count")
            elif key == "rot":
                head, _, rest = line.partition(":")
                v = int(head.split()[1])
                if v in rot:
                    raise FormatError(f"line {lineno}: duplicate rotation for vertex {v}")
                rot[v] = [int(t) for t in rest.split()]
            elif key == "edge":
                parts = line.split()
                if len(parts) != 5:
                    raise FormatError(f"line {lineno}: expected 'edge id u v weight'")
                e, u, v = int(parts[1]), int(parts[2]), int(parts[3])
                if e in edges:
                    raise FormatError(f"line {lineno}: duplicate edge id {e}")
                edges[e] = (u, v, _parse_weight(parts[4], lineno))
            elif key == "req":
                parts = line.split()
                v, r = int(parts[1]), int(parts[2])
                if v in req:
                    raise FormatError(f"line {lineno}: duplicate requirement for vertex {v}")
                req[v] = r
            elif extra is not None:
                extra(lineno, line)
            else:
                raise FormatError(f"line {lineno}: unknown keyword {key!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"line {lineno}: {exc}") from exc
    if n is None:
        raise FormatError("missing 'vertices' line")
    if sorted(edges) != list(range(len(edges))):
        raise FormatError("edge ids must be 0..m-1")
    for v in list(rot) + list(req):
        if not 0 <= v < n:
            raise FormatError(f"vertex {v} outside 0..{n - 1}")
    edge_list = [(edges[e][0], edges[e][1]) for e in range(len(edges))]
    weights = [edges[e][2] for e in range(len(edges))]
    rotation = [rot.get(v, []) for v in range(n)]
    g = EmbeddedMultigraph(n, edge_list, rotation, weights)
    try:
        r = RequirementMap.from_dict(n, req)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    return g, r


def read_graph(text: str) -> tuple[EmbeddedMultigraph, RequirementMap]:
    return parse_graph_lines(_tokens(text))


def write_graph(g: EmbeddedMultigraph, req=None) -> str:
    out = [HEADER, f"vertices {g.n}"]
    for v in range(g.n):
        darts = " ".join(str(d) for d in g.rotation[v])
        out.append(f"rot {v}:" + (f" {darts}" if darts else ""))
    for e in range(g.m):
        out.append(f"edge {e} {g.eu[e]} {g.ev[e]} {_format_weight(g.weights[e])}")
    if req is not None:
        for v, r in enumerate(req):
            if r:
                out.append(f"req {v} {r}")
    return "\n".join(out) + "\n"


def load_graph(path) -> tuple[EmbeddedMultigraph, RequirementMap]:
    return read_graph(Path(path).read_text())


def save_graph(path, g: EmbeddedMultigraph, req=None) -> None:
    Path(path).write_text(write_graph(g, req))


# -- solutions ------------------------------------------------------------------


def write_solution(g: EmbeddedMultigraph, sol: MultiSolution) -> str:
    out = ["solution v1", f"k {sol.k}", f"weight {_format_weight(sol.weight(g))}"]
    for e, c in sol.mult.items():
        out.append(f"mult {e} {c}")
    return "\n".join(out) + "\n"


def read_solution(text: str) -> tuple[MultiSolution, Fraction | None]:
    lines = list(_tokens(text))
    if not lines or lines[0][1] != "solution v1":
        raise FormatError("missing header 'solution v1'")
    k = 3
    weight = None
    mult = {}
    for lineno, line in lines[1:]:
        parts = line.split()
        if parts[0] == "k":
            k = int(parts[1])
        elif parts[0] == "weight":
            weight = _parse_weight(parts[1], lineno)
        elif parts[0] == "mult":
            mult[int(parts[1])] = int(parts[2])
        else:
            raise FormatError(f"line {lineno}: unknown keyword {parts[0]!r}")
    return MultiSolution(mult, k), weight


# -- spanners ---------------------------------------------------------------------


def write_spanner(g: EmbeddedMultigraph, req, mortar_edges, trees) -> str:
    """Graph block, the mortar edge list, then one line per stored brick tree.

    ``trees`` maps ``(brick_id, subset_bitmask)`` to edge ids of ``g``.
    """
    out = [write_graph(g, req).rstrip("\n")]
    out.append("mortar:" + "".join(f" {e}" for e in sorted(mortar_edges)))
    for (bid, mask), edges in sorted(trees.items()):
        out.append(f"tree {bid} {mask}:" + "".join(f" {e}" for e in sorted(edges)))
    return "\n".join(out) + "\n"


def read_spanner(text: str):
    mortar: list[int] = []
    trees: dict[tuple[int, int], list[int]] = {}

    def extra(lineno, line):
        head, _, rest = line.partition(":")
        parts = head.split()
        if parts[0] == "mortar":
            mortar.extend(int(t) for t in rest.split())
        elif parts[0] == "tree":
            trees[(int(parts[1]), int(parts[2]))] = [int(t) for t in rest.split()]
        else:
            raise FormatError(f"line {lineno}: unknown keyword {parts[0]!r}")

    g, r = parse_graph_lines(_tokens(text), extra=extra)
    return g, r, mortar, trees


__all__ = [
    "FormatError",
    "EmbeddingError",
    "read_graph",
    "write_graph",
    "load_graph",
    "save_graph",
    "read_solution",
    "write_solution",
    "read_spanner",
    "write_spanner",
]
