"""Exact dynamic program for relaxed k-ECP over a branch decomposition.

State of a partial solution ``H`` on the edges below a node with separator
``L``: its *cut profile*.  For every side assignment ``sigma`` of ``L`` and
requirement levels ``a, b``, ``g(sigma, a, b)`` is the smallest number of
``H`` edge copies crossing a bipartition that extends ``sigma`` to the
vertices already forgotten (all edges below the node), among bipartitions
whose forgotten side-1 vertices include requirement ``>= a`` and forgotten
side-0 vertices requirement ``>= b``.  ``INF`` marks level pairs no
bipartition reaches.

A solution is feasible iff every cut ``X`` has at least
``min(R(X), R(V - X))`` copies crossing it (``R`` = largest requirement in
the set), which at the root reads ``g(a, b) >= min(a, b)``.  Joining two
children adds their profiles; forgetting a vertex folds it into one side.
Values are capped at the largest threshold they can still be compared to,
which keeps the state space finite and small.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..connectivity import is_feasible, minimalize
from ..graph import EmbeddedMultigraph, MultiSolution, as_requirements
from .decomposition import BranchDecomposition, decompose

INF = 100
CHUNK_ELEMENTS = 1 << 22


class DPBudgetExceeded(RuntimeError):
    pass


@dataclass
class Table:
    sep: tuple[int, ...]
    rows: np.ndarray  # (entries, 2^|sep| * nl * nl) uint8
    weights: np.ndarray  # int64 scaled weights
    back: list  # leaf: multiplicity; internal: (i, j) child entry indices


@dataclass
class DPResult:
    weight: Fraction | None
    solution: MultiSolution | None
    status: str  # optimal | infeasible | budget
    width: int
    stats: dict = field(default_factory=dict)


class _Levels:
    def __init__(self, req):
        self.values = sorted({0} | {x for x in req if x > 0})
        self.nl = len(self.values)
        self.rmax = self.values[-1]

    def fold_map(self, rx):
        """Level index after a vertex of requirement ``rx`` joins that side."""
        return np.array([i if self.values[i] > rx else 0 for i in range(self.nl)], dtype=np.intp)

    def cap(self, rl, rout):
        v = self.values
        hi = max(rl, rout)
        out = np.empty((self.nl, self.nl), dtype=np.uint8)
        for a in range(self.nl):
            for b in range(self.nl):
                out[a, b] = min(self.rmax, max(v[a], hi), max(v[b], hi))
        return out

    def connect_thresholds(self, rl, rout):
        v = self.values
        hi = max(rl, rout)
        t0 = np.empty((self.nl, self.nl), dtype=np.uint8)
        t1 = np.empty((self.nl, self.nl), dtype=np.uint8)
        for a in range(self.nl):
            for b in range(self.nl):
                t0[a, b] = min(v[a], max(v[b], hi))
                t1[a, b] = min(v[b], max(v[a], hi))
        return t0, t1


def _forget(h: np.ndarray, pos: int, nbits: int, fold: np.ndarray) -> np.ndarray:
    """Fold separator bit ``pos`` of a (..., 2^nbits, nl, nl) array."""
    lead = h.shape[:-3]
    nl = h.shape[-1]
    hi = 1 << (nbits - 1 - pos)
    lo = 1 << pos
    v = h.reshape(lead + (hi, 2, lo, nl, nl))
    side1 = v[..., 1, :, :, :].take(fold, axis=-2)
    side0 = v[..., 0, :, :, :].take(fold, axis=-1)
    out = np.minimum(side1, side0)
    return out.reshape(lead + (hi * lo, nl, nl))


def _finish(h, sep_bits, lev: _Levels, cap, thr, use_filter):
    """Cap values, drop non-connecting states; returns (flat rows, keep mask)."""
    h = np.where(h >= INF, np.uint8(INF), np.minimum(h, cap)).astype(np.uint8)
    lead = h.shape[:-3]
    flat = h.reshape(lead + (-1,))
    if use_filter or sep_bits == 0:
        t0, t1 = thr
        bad0 = (h[..., 0, :, :] < t0).any(axis=(-1, -2))
        bad1 = (h[..., -1, :, :] < t1).any(axis=(-1, -2))
        keep = ~(bad0 | bad1)
    else:
        keep = np.ones(lead, dtype=bool)
    return flat, keep


def _merge_into(acc: dict, rows: np.ndarray, weights: np.ndarray, backs):
    """Keep the lightest entry per distinct row."""
    if len(rows) == 0:
        return
    order = np.argsort(weights, kind="stable")
    rows = rows[order]
    weights = weights[order]
    rows = np.ascontiguousarray(rows)
    view = rows.view(np.dtype((np.void, rows.shape[1])))[:, 0]
    _, first = np.unique(view, return_index=True)
    for i in first:
        key = view[i].tobytes()
        w = int(weights[i])
        cur = acc.get(key)
        if cur is None or w < cur[0]:
            acc[key] = (w, rows[i], backs(order[i]))


def _table_from(acc: dict, sep, width_d) -> Table:
    items = sorted(acc.values(), key=lambda t: (t[0], t[1].tobytes()))
    if items:
        rows = np.stack([t[1] for t in items]).astype(np.uint8)
    else:
        rows = np.zeros((0, width_d), dtype=np.uint8)
    weights = np.array([t[0] for t in items], dtype=np.int64)
    return Table(tuple(sep), rows, weights, [t[2] for t in items])


def _dominance_prune(t: Table) -> Table:
    """Drop entries pointwise dominated by a no-heavier entry.

    Rows are distinct after deduplication, so domination is strict and
    never mutual; every later operation is monotone in the profile.
    """
    n = len(t.weights)
    if n < 2:
        return t
    # a dominator is lighter, or equally heavy with a larger row sum, so it
    # is visited first; dominated dominators are covered by transitivity
    sums = t.rows.sum(axis=1, dtype=np.int64)
    order = np.lexsort((-sums, t.weights))
    kept: list[int] = []
    block = np.empty((0, t.rows.shape[1]), dtype=np.uint8)
    for i in order:
        row = t.rows[i]
        if len(kept) and (block >= row).all(axis=1).any():
            continue
        kept.append(int(i))
        block = t.rows[kept]
    idx = np.array(sorted(kept), dtype=np.intp)
    return Table(t.sep, t.rows[idx], t.weights[idx], [t.back[i] for i in idx])


def _leaf_table(g, e, max_mult, sep, lev, req, cap, thr, use_filter) -> Table:
    u, v = g.eu[e], g.ev[e]
    U = sorted({u, v})
    nl = lev.nl
    rows = []
    for mlt in range(max_mult + 1):
        h = np.full((1 << len(U), nl, nl), INF, dtype=np.uint8)
        for s in range(1 << len(U)):
            if len(U) == 2:
                crossing = (s & 1) != ((s >> 1) & 1)
            else:
                crossing = False
            h[s, 0, 0] = mlt if crossing else 0
        rows.append(h)
    h = np.stack(rows)
    nbits = len(U)
    for pos in reversed(range(len(U))):
        x = U[pos]
        if x not in sep:
            h = _forget(h, pos, nbits, lev.fold_map(req[x]))
            nbits -= 1
    flat, keep = _finish(h, nbits, lev, cap, thr, use_filter)
    acc: dict = {}
    idx = np.nonzero(keep)[0]
    weights = np.array([mlt * g.iw[e] for mlt in range(max_mult + 1)], dtype=np.int64)
    _merge_into(acc, flat[idx], weights[idx], lambda i: int(idx[i]))
    return _table_from(acc, sep, flat.shape[-1])


def _join_tables(t1: Table, t2: Table, sep, lev, req, cap, thr, use_filter, budget, ub=None) -> Table:
    U = sorted(set(t1.sep) | set(t2.sep))
    nl = lev.nl
    SU = 1 << len(U)
    pos1 = [U.index(x) for x in t1.sep]
    pos2 = [U.index(x) for x in t2.sep]
    sig = np.arange(SU)
    idx1 = np.zeros(SU, dtype=np.intp)
    idx2 = np.zeros(SU, dtype=np.intp)
    for i, p in enumerate(pos1):
        idx1 |= ((sig >> p) & 1) << i
    for i, p in enumerate(pos2):
        idx2 |= ((sig >> p) & 1) << i
    n1, n2 = len(t1.weights), len(t2.weights)
    if budget is not None and n1 * n2 > budget:
        raise DPBudgetExceeded(f"join of {n1} x {n2} states exceeds budget {budget}")
    G1 = t1.rows.reshape(n1, -1, nl, nl)[:, idx1]
    G2 = t2.rows.reshape(n2, -1, nl, nl)[:, idx2]
    forget = [(U.index(x), x) for x in U if x not in sep]
    forget.sort(reverse=True)
    per_pair = SU * nl * nl
    chunk = max(1, CHUNK_ELEMENTS // max(1, per_pair * n2))
    acc: dict = {}
    D = (1 << len(sep)) * nl * nl
    for start in range(0, n1, chunk):
        stop = min(n1, start + chunk)
        nc = n2
        if ub is not None:
            # child tables are sorted by weight: only a prefix of t2 can fit
            nc = int(np.searchsorted(t2.weights, ub - t1.weights[start], side="right"))
            if nc == 0:
                break
        A = G1[start:stop][:, None]
        B = G2[None, :nc]
        h = np.minimum(
            np.minimum(A + B[..., 0:1, 0:1], A[..., :, 0:1] + B[..., 0:1, :]),
            np.minimum(A[..., 0:1, :] + B[..., :, 0:1], A[..., 0:1, 0:1] + B),
        )
        nbits = len(U)
        for pos, x in forget:
            h = _forget(h, pos, nbits, lev.fold_map(req[x]))
            nbits -= 1
        flat, keep = _finish(h, nbits, lev, cap, thr, use_filter)
        flat = flat.reshape(-1, D)
        keep = keep.reshape(-1)
        w = (t1.weights[start:stop][:, None] + t2.weights[None, :nc]).reshape(-1)
        if ub is not None:
            keep &= w <= ub
        sel = np.nonzero(keep)[0]

        def back(i, sel=sel, start=start, nc=nc):
            p = int(sel[i])
            return (start + p // nc, p % nc)

        _merge_into(acc, flat[sel], w[sel], back)
    return _table_from(acc, sep, D)


def _vertices_of(g, edges):
    vs = set()
    for e in edges:
        vs.add(g.eu[e])
        vs.add(g.ev[e])
    return vs


def dp_solve(
    g: EmbeddedMultigraph,
    r,
    k: int = 3,
    bd: BranchDecomposition | None = None,
    *,
    width_cap: int | None = None,
    connecting_filter: bool = True,
    dominance: bool = True,
    state_budget: int | None = None,
    spot_check: int = 0,
    seed: int = 0,
    table_dump: bool = False,
    bound: bool = True,
) -> DPResult:
    """Minimum-weight feasible multiplicity vector via the branch DP.

    ``bd`` may decompose ``g`` itself (each leaf then chooses a multiplicity
    ``0..k``, the same as a bundle of ``k`` parallel copies) or the
    ``k``-augmented graph from :func:`augment_parallel` (each leaf a single
    copy).  Without ``bd`` a heuristic decomposition of ``g`` is used.

    With ``bound`` the weight of a greedy minimal solution caps every
    table: partial solutions heavier than a known feasible one are dropped.
    """
    r = as_requirements(r, g.n)
    req = list(r)
    terms = r.terminals
    stats: dict = {}
    if len(terms) < 2:
        return DPResult(Fraction(0), MultiSolution({}, k), "optimal", 0, stats)
    if max(req) > k:
        return DPResult(None, None, "infeasible", 0, stats)
    deg = [0] * g.n
    for e in range(g.m):
        deg[g.eu[e]] += 1
        deg[g.ev[e]] += 1
    if any(deg[t] == 0 for t in terms):
        return DPResult(None, None, "infeasible", 0, stats)
    ub = None
    if bound:
        full = [k] * g.m
        if not is_feasible(g, full, r):
            return DPResult(None, None, "infeasible", 0, stats)
        inc = minimalize(g, MultiSolution.from_vector(full, k), r)
        ub = sum(g.iw[e] * c for e, c in inc.mult.items())
        stats["upper_bound"] = Fraction(ub, g.scale)
    if bd is None:
        bd = decompose(g, width_cap=width_cap, seed=seed)
    hg = bd.graph
    if hg.m == g.m:
        max_mult, to_parent = k, list(range(g.m))
    elif hg.m == k * g.m:
        max_mult, to_parent = 1, [e // k for e in range(hg.m)]
    else:
        raise ValueError("decomposition is neither of g nor of its k-augmentation")
    if width_cap is not None and bd.width > width_cap:
        from .decomposition import WidthExceeded

        raise WidthExceeded(f"decomposition width {bd.width} > cap {width_cap}")
    lev = _Levels(req)
    used = _vertices_of(hg, range(hg.m))
    # requirement still to come from vertices outside each node's edges
    tables: dict[int, Table] = {}
    sizes = []
    for x in bd.postorder():
        nd = bd.nodes[x]
        sep = nd.separator
        inside = _vertices_of(hg, nd.edges)
        rl = max((req[v] for v in sep), default=0)
        rout = max((req[v] for v in used - inside), default=0)
        cap = lev.cap(rl, rout)
        thr = lev.connect_thresholds(rl, rout)
        if nd.edge is not None:
            t = _leaf_table(hg, nd.edge, max_mult, sep, lev, req, cap, thr, connecting_filter)
        else:
            c1, c2 = nd.children
            t = _join_tables(tables[c1], tables[c2], sep, lev, req, cap, thr, connecting_filter, state_budget, ub)
        if dominance:
            t = _dominance_prune(t)
        tables[x] = t
        sizes.append(len(t.weights))
        if len(t.weights) == 0:
            break
    stats["max_states"] = max(sizes, default=0)
    stats["total_states"] = int(sum(sizes))
    if table_dump:
        stats["table_sizes"] = sizes
    root = tables.get(bd.root)
    if root is None or len(root.weights) == 0:
        return DPResult(None, None, "infeasible", bd.width, stats)
    # the root table is already filtered down to feasible profiles
    best = int(np.argmin(root.weights))
    hmult = _witness(bd, tables, bd.root, best)
    vec = [0] * g.m
    for e, c in hmult.items():
        vec[to_parent[e]] += c
    sol = MultiSolution.from_vector(vec, k)
    weight = Fraction(int(root.weights[best]), g.scale)
    if sol.weight(g) != weight:
        raise AssertionError("witness weight differs from the table value")
    if not is_feasible(g, sol, r):
        raise AssertionError("DP witness is infeasible")
    if spot_check:
        stats["spot_checks"] = spot_check_entries(bd, tables, req, lev, spot_check, seed)
    return DPResult(weight, sol, "optimal", bd.width, stats)


def _witness(bd, tables, node, entry) -> dict[int, int]:
    out: dict[int, int] = {}
    stack = [(node, entry)]
    while stack:
        x, i = stack.pop()
        nd = bd.nodes[x]
        b = tables[x].back[i]
        if nd.edge is not None:
            if b:
                out[nd.edge] = out.get(nd.edge, 0) + b
        else:
            stack.append((nd.children[0], b[0]))
            stack.append((nd.children[1], b[1]))
    return out


# -- independent recomputation for spot checks ------------------------------------------


def brute_profile(hg, mult: dict[int, int], node_edges, sep, req, lev: _Levels, rl, rout) -> np.ndarray:
    """Cut profile of an explicit partial solution by enumerating bipartitions."""
    inner = sorted(_vertices_of(hg, node_edges) - set(sep))
    nl = lev.nl
    cap = lev.cap(rl, rout)
    out = np.full((1 << len(sep), nl, nl), INF, dtype=np.int64)
    pos = {v: i for i, v in enumerate(sep)}
    ipos = {v: i for i, v in enumerate(inner)}
    edges = [(hg.eu[e], hg.ev[e], c) for e, c in mult.items() if c and e in node_edges]
    for s in range(1 << len(sep)):
        for X in range(1 << len(inner)):
            def side(v):
                if v in pos:
                    return (s >> pos[v]) & 1
                return (X >> ipos[v]) & 1

            cut = sum(c for u, v, c in edges if side(u) != side(v))
            r1 = max((req[v] for v in inner if (X >> ipos[v]) & 1), default=0)
            r0 = max((req[v] for v in inner if not (X >> ipos[v]) & 1), default=0)
            for a in range(nl):
                if lev.values[a] > r1:
                    continue
                for b in range(nl):
                    if lev.values[b] > r0:
                        continue
                    out[s, a, b] = min(out[s, a, b], cut)
    capped = np.where(out >= INF, INF, np.minimum(out, cap))
    return capped.astype(np.uint8).reshape(-1)


def spot_check_entries(bd, tables, req, lev, count, seed) -> int:
    """Materialise random entries' witnesses and re-derive their profiles.

    Also checks single-pair demands on each witness with the exhaustive
    path-packing routine.  Raises AssertionError on any disagreement.
    """
    from .characteristic import alg_demands

    rng = random.Random(seed)
    hg = bd.graph
    used = _vertices_of(hg, range(hg.m))
    cands = [x for x in tables if len(tables[x].weights)]
    done = 0
    for _ in range(count):
        x = rng.choice(cands)
        nd = bd.nodes[x]
        inner = _vertices_of(hg, nd.edges) - set(nd.separator)
        if len(inner) > 10:
            continue
        t = tables[x]
        i = rng.randrange(len(t.weights))
        mult = _witness(bd, tables, x, i)
        inside = _vertices_of(hg, nd.edges)
        rl = max((req[v] for v in nd.separator), default=0)
        rout = max((req[v] for v in used - inside), default=0)
        prof = brute_profile(hg, mult, nd.edges, nd.separator, req, lev, rl, rout)
        if not np.array_equal(prof, t.rows[i]):
            raise AssertionError(f"node {x} entry {i}: witness profile differs from its key")
        sep = nd.separator
        if len(sep) >= 2:
            a, b = rng.sample(range(len(sep)), 2)
            nl = lev.nl
            prof3 = prof.reshape(-1, nl, nl)
            lam = min(
                int(prof3[s, 0, 0])
                for s in range(1 << len(sep))
                if ((s >> a) & 1) != ((s >> b) & 1)
            )
            edges = [(hg.eu[e], hg.ev[e]) for e, c in mult.items() for _ in range(c)]
            exact_below = int(lev.cap(rl, rout)[0, 0])
            if lam < exact_below:
                # the capped profile is exact below the cap
                assert alg_demands(edges, [(sep[a], sep[b], lam)])
                assert not alg_demands(edges, [(sep[a], sep[b], lam + 1)])
            else:
                assert alg_demands(edges, [(sep[a], sep[b], lam)])
        done += 1
    return done
