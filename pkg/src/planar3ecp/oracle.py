"""Exact small-instance solver and minimal-subgraph enumeration.

Ground truth for the acceptance suite: a depth-first branch and bound over
multiplicity vectors, with feasibility pruning through the flow kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .connectivity import (
    InfeasibleError,
    _network,
    arc_caps,
    is_feasible,
    is_vertex_feasible,
    minimalize,
)
from .graph import EmbeddedMultigraph, MultiSolution, as_requirements

DEFAULT_MAX_SLOTS = 36


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class OracleResult:
    weight: Fraction | None
    solution: MultiSolution | None
    nodes_explored: int
    status: str = "optimal"  # optimal | infeasible | unknown

    @property
    def known(self) -> bool:
        return self.status != "unknown"


def _needed_degree(r, terms):
    need = {}
    for t in terms:
        need[t] = max((min(r[t], r[u]) for u in terms if u != t), default=0)
    return need


def exact_solve(
    g: EmbeddedMultigraph,
    r,
    k: int = 3,
    budget: int | None = 2_000_000,
    max_slots: int | None = DEFAULT_MAX_SLOTS,
) -> OracleResult:
    """Minimum-weight multiplicity vector in ``{0..k}^E`` meeting ``r``.

    Among optimal vectors the lexicographically smallest (edge 0 first) is
    returned.  Exceeding ``budget`` search nodes yields status ``unknown``
    rather than a possibly wrong optimum.
    """
    r = as_requirements(r, g.n)
    if max_slots is not None and k * g.m > max_slots:
        raise ValueError(f"instance has {k * g.m} multiplicity slots, cap is {max_slots}")
    terms = r.terminals
    if len(terms) < 2:
        return OracleResult(Fraction(0), MultiSolution({}, k), 1)
    if max(r) > k:
        return OracleResult(None, None, 1, "infeasible")
    net = _network(g)
    reqs = [r[t] for t in terms]
    m = g.m
    w = g.iw
    caps = arc_caps([k] * m)
    if not net.feasible(caps, terms, reqs):
        return OracleResult(None, None, 1, "infeasible")

    # incumbent from a greedy minimal solution; exact ties still get explored
    inc = minimalize(g, MultiSolution.from_vector([k] * m, k), r)
    best_vec = list(inc.vector(m))
    best_w = sum(w[e] * best_vec[e] for e in range(m))
    from_heuristic = True

    need = _needed_degree(r, terms)
    incident = {t: [] for t in terms}
    for e in range(m):
        for x in (g.eu[e], g.ev[e]):
            if x in incident:
                incident[x].append(e)

    vec = [k] * m  # free edges (index >= depth) sit at k in ``caps``
    nodes = 0

    def lower_bound(depth, partial):
        total2 = 0
        for t in terms:
            have = 0
            free = []
            for e in incident[t]:
                if e < depth:
                    have += vec[e]
                else:
                    free.append(w[e])
            deficit = need[t] - have
            if deficit <= 0:
                continue
            free.sort()
            for c in free:
                take = min(k, deficit)
                total2 += take * c
                deficit -= take
                if deficit <= 0:
                    break
        # every edge meets at most two terminals
        return partial + (total2 + 1) // 2

    def feasible_with(depth, fill):
        c = caps.copy()
        c[2 * depth:] = fill
        return net.feasible(c, terms, reqs)

    def search(depth, partial):
        nonlocal best_vec, best_w, from_heuristic, nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceeded
        slack = 1 if from_heuristic else 0
        if lower_bound(depth, partial) >= best_w + slack:
            return
        if depth == m:
            return
        for c in range(0, k + 1):
            vec[depth] = c
            caps[2 * depth] = caps[2 * depth + 1] = c
            p2 = partial + c * w[depth]
            slack = 1 if from_heuristic else 0
            if p2 >= best_w + slack:
                break
            if c < k and not feasible_with(depth + 1, k):
                continue
            if feasible_with(depth + 1, 0):
                best_vec = vec[: depth + 1] + [0] * (m - depth - 1)
                best_w = p2
                from_heuristic = False
                break
            search(depth + 1, p2)
        vec[depth] = k
        caps[2 * depth] = caps[2 * depth + 1] = k

    try:
        search(0, 0)
    except BudgetExceeded:
        return OracleResult(None, None, nodes, "unknown")
    sol = MultiSolution.from_vector(best_vec, k)
    return OracleResult(Fraction(best_w, g.scale), sol, nodes)


def enumerate_minimal(
    g: EmbeddedMultigraph,
    r,
    mode: str = "edge",
    max_vertices: int = 10,
    budget: int | None = 2_000_000,
) -> list[list[int]]:
    """All inclusion-minimal feasible edge sets (each edge at most once).

    ``mode`` selects edge- or vertex-disjoint path requirements.
    """
    if g.n > max_vertices:
        raise ValueError(f"enumerate_minimal is limited to {max_vertices} vertices")
    if mode not in ("edge", "vertex"):
        raise ValueError("mode must be 'edge' or 'vertex'")
    r = as_requirements(r, g.n)

    if mode == "edge":
        def feas(s):
            return is_feasible(g, s, r)
    else:
        def feas(s):
            return is_vertex_feasible(g, s, r)

    if len(r.terminals) < 2:
        return [[]]
    if not feas(set(range(g.m))):
        return []
    out = []
    nodes = 0

    def dfs(i, incl, excluded):
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceeded("enumerate_minimal budget exceeded")
        if feas(incl):
            if all(not feas(incl - {e}) for e in incl):
                out.append(sorted(incl))
            return
        if i == g.m:
            return
        avail = set(range(g.m)) - excluded
        if not feas(avail):
            return
        dfs(i + 1, incl | {i}, excluded)
        dfs(i + 1, incl, excluded | {i})

    dfs(0, frozenset(), frozenset())
    return sorted(out)


def brute_force_optimum(g: EmbeddedMultigraph, r, k: int = 3) -> Fraction | None:
    """Plain enumeration of all ``(k+1)^m`` vectors; for tiny fixtures only."""
    r = as_requirements(r, g.n)
    best = None
    for idx in range((k + 1) ** g.m):
        vec = []
        x = idx
        for _ in range(g.m):
            vec.append(x % (k + 1))
            x //= k + 1
        if is_feasible(g, vec, r):
            wt = g.weight({e: c for e, c in enumerate(vec)})
            if best is None or wt < best:
                best = wt
    return best


__all__ = [
    "OracleResult",
    "BudgetExceeded",
    "InfeasibleError",
    "exact_solve",
    "enumerate_minimal",
    "brute_force_optimum",
]
