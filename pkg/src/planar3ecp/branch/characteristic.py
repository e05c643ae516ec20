"""Connectivity characteristics in their set form, plus the demand oracle.

This module keeps the characteristic ``(C_H, P_H, Path_H)`` literally:
separator completions are multisets of separator edges, configurations are
``(A, B, r)`` triples, and combination of two children runs the three
sub-procedures (generalised completions, cross-pair completions,
generalised configurations, merged path sets) with :func:`alg_demands` as
the path-packing subroutine.  The production solver in :mod:`.dp` uses the
equivalent cut-profile state instead; this form serves for inspection and
small-scale checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Sequence

# -- demand oracle ---------------------------------------------------------------------


def _pair(x, y):
    return (x, y) if x <= y else (y, x)


def _count_graph(edges):
    counts: dict[tuple, int] = {}
    for u, v in edges:
        if u == v:
            continue
        p = _pair(u, v)
        counts[p] = counts.get(p, 0) + 1
    return counts


def _flow(counts: dict, s, t, limit) -> int:
    """Max flow on an undirected count graph (small, dict based)."""
    if s == t:
        return limit
    res: dict = {}
    adj: dict = {}
    for (u, v), c in counts.items():
        if c <= 0:
            continue
        res[(u, v)] = res.get((u, v), 0) + c
        res[(v, u)] = res.get((v, u), 0) + c
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    flow = 0
    while flow < limit:
        pred = {s: None}
        q = [s]
        for x in q:
            if x == t:
                break
            for y in sorted(adj.get(x, ())):
                if y not in pred and res[(x, y)] > 0:
                    pred[y] = x
                    q.append(y)
        if t not in pred:
            break
        y = t
        while pred[y] is not None:
            x = pred[y]
            res[(x, y)] -= 1
            res[(y, x)] += 1
            y = x
        flow += 1
    return flow


def alg_demands(edges: Iterable[tuple], demands: Iterable[tuple]) -> bool:
    """Whether mutually edge-disjoint path families meet every demand.

    ``edges`` lists the multigraph (parallel edges repeated); each demand
    ``(x, y, b)`` asks for ``b`` paths between ``x`` and ``y``, all paths
    of all demands pairwise edge-disjoint.  Exhaustive search over simple
    paths with memoisation and a max-flow necessary condition.
    """
    counts = _count_graph(edges)
    need: dict[tuple, int] = {}
    for x, y, b in demands:
        if b <= 0 or x == y:
            continue
        p = _pair(x, y)
        need[p] = need.get(p, 0) + b
    if not need:
        return True
    keys = sorted(counts)
    index = {p: i for i, p in enumerate(keys)}
    adj: dict = {}
    for u, v in keys:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    for x in adj:
        adj[x].sort()
    path_cache: dict = {}

    def paths(x, y):
        if (x, y) not in path_cache:
            out = []
            seen = {x}

            def dfs(a, acc):
                if a == y:
                    out.append(tuple(acc))
                    return
                for b in adj.get(a, ()):
                    if b not in seen:
                        seen.add(b)
                        acc.append(index[_pair(a, b)])
                        dfs(b, acc)
                        acc.pop()
                        seen.discard(b)

            dfs(x, [])
            out.sort(key=lambda p: (len(p), p))
            path_cache[(x, y)] = out
        return path_cache[(x, y)]

    memo = set()
    dem = sorted(need.items())

    def feasible_now(cap, rem):
        cnt = {keys[i]: cap[i] for i in range(len(keys)) if cap[i]}
        for (x, y), b in rem:
            if _flow(cnt, x, y, b) < b:
                return False
        return True

    def solve(cap, rem, start):
        if not rem:
            return True
        state = (cap, rem, start)
        if state in memo:
            return False
        if not feasible_now(cap, rem):
            memo.add(state)
            return False
        (x, y), b = rem[0]
        plist = paths(x, y)
        for j in range(start, len(plist)):
            p = plist[j]
            if all(cap[i] > 0 for i in p):
                c2 = list(cap)
                for i in p:
                    c2[i] -= 1
                if b == 1:
                    ok = solve(tuple(c2), rem[1:], 0)
                else:
                    ok = solve(tuple(c2), (((x, y), b - 1),) + rem[1:], j)
                if ok:
                    return True
        memo.add(state)
        return False

    cap0 = tuple(counts[p] for p in keys)
    return solve(cap0, tuple(dem), 0)


# -- characteristic objects ---------------------------------------------------------------

Completion = tuple  # sorted tuple of (x, y, count) with x < y, 1 <= count <= k


def completion(items: Iterable[tuple]) -> Completion:
    acc: dict = {}
    for x, y, c in items:
        if c:
            p = _pair(x, y)
            acc[p] = acc.get(p, 0) + c
    return tuple(sorted((x, y, c) for (x, y), c in acc.items()))


def bset(items: Iterable[tuple]) -> frozenset:
    return frozenset(completion(items))


@dataclass(frozen=True)
class SeparatorCompletion:
    items: Completion

    def demands(self):
        return list(self.items)


@dataclass(frozen=True)
class Configuration:
    """``A[i]`` disjoint paths from the terminal to ``L[i]``; ``B`` separator pair
    path counts; all mutually edge-disjoint; ``req`` the terminal's requirement."""

    A: tuple
    B: frozenset
    req: int


@dataclass(frozen=True)
class Characteristic:
    C: frozenset  # of Completion
    P: frozenset  # of Configuration
    paths: frozenset  # of B-sets (frozensets)


@dataclass
class LeafSets:
    L: tuple
    com: frozenset  # Com_H(u, v)
    path_configs: dict  # terminal -> frozenset of configurations
    path_h: frozenset


def leaf_sets(u: int, v: int, r, k: int) -> LeafSets:
    """The three base cases for a single edge ``uv`` on separator ``(u, v)``."""
    ru, rv = r[u], r[v]
    one = bset([(u, v, 1)])
    path_h = frozenset([one])
    if ru > 0 and rv > 0:
        lo = max(0, min(ru, rv) - 1)
        com = frozenset(completion([(u, v, c)]) for c in range(lo, k + 1))
        configs = {
            u: frozenset([Configuration((k, 0), one, ru), Configuration((k, 1), frozenset(), ru)]),
            v: frozenset([Configuration((0, k), one, rv), Configuration((1, k), frozenset(), rv)]),
        }
    else:
        com = frozenset(completion([(u, v, c)]) for c in range(0, k + 1))
        configs = {}
        if ru > 0 or rv > 0:
            t, rt = (u, ru) if ru > 0 else (v, rv)
            if t == u:
                configs[u] = frozenset(
                    [Configuration((k, 0), one, rt), Configuration((k, 1), frozenset(), rt)]
                )
            else:
                # the terminal plays the role of the first endpoint, mirrored onto (u, v)
                configs[v] = frozenset(
                    [Configuration((0, k), one, rt), Configuration((1, k), frozenset(), rt)]
                )
    return LeafSets((u, v), com, configs, path_h)


def leaf_characteristics(u: int, v: int, r, k: int, weight=1) -> set[tuple[Characteristic, object]]:
    """Every characteristic of the single-edge subgraph, with its weight."""
    ls = leaf_sets(u, v, r, k)
    both = r[u] > 0 and r[v] > 0
    c_choices = [frozenset([c]) for c in sorted(ls.com)] if both else [frozenset()]
    term_choices = [sorted(ls.path_configs[t], key=repr) for t in sorted(ls.path_configs)]
    out = set()
    for cset in c_choices:
        for pick in product(*term_choices):
            out.add((Characteristic(cset, frozenset(pick), ls.path_h), weight))
    return out


# -- combination --------------------------------------------------------------------------


def _all_completions(L: Sequence[int], k: int):
    pairs = list(combinations(sorted(L), 2))
    for counts in product(range(k + 1), repeat=len(pairs)):
        yield completion((x, y, c) for (x, y), c in zip(pairs, counts))


def _edges_of(items, mult=1):
    out = []
    for x, y, c in items:
        out += [(x, y)] * (c * mult)
    return out


def _minimal_completions(cands):
    """Completions not containing another candidate as a sub-multiset."""
    def le(a, b):
        db = {(x, y): c for x, y, c in b}
        return all(db.get((x, y), 0) >= c for x, y, c in a)

    cands = sorted(set(cands), key=lambda c: (sum(t[2] for t in c), c))
    out = []
    for c in cands:
        if not any(le(o, c) for o in out):
            out.append(c)
    return out


def _maximal_configs(cands):
    def le(a: Configuration, b: Configuration):
        if a.req != b.req:
            return False
        if any(x > y for x, y in zip(a.A, b.A)):
            return False
        db = {(x, y): c for x, y, c in b.B}
        return all(db.get((x, y), 0) >= c for x, y, c in a.B)

    cands = sorted(set(cands), key=lambda c: (-sum(c.A) - sum(t[2] for t in c.B), repr(c)))
    out = []
    for c in cands:
        if not any(le(c, o) for o in out):
            out.append(c)
    return out


def combine(
    ch1: Characteristic,
    ch2: Characteristic,
    L1: Sequence[int],
    L2: Sequence[int],
    L: Sequence[int],
    k: int,
    outside_reqs: Sequence[int] = (),
    reduce: bool = True,
) -> set[Characteristic]:
    """Characteristics of ``H1 + H2`` derivable from one characteristic of each child.

    With ``reduce`` only minimal completions and maximal configurations are
    kept in each candidate set, which preserves every feasible completion
    up to dominance.
    """
    L1, L2, L = tuple(L1), tuple(L2), tuple(L)
    star = (-3,)  # auxiliary nodes use negative ids

    def with_empty(paths):
        return [frozenset()] + sorted(paths, key=lambda b: sorted(b))

    # first part: generalise each completion of a child to completions on L
    choice_sets = []
    for i, ch in ((1, ch1), (2, ch2)):
        other = ch2 if i == 1 else ch1
        for C in sorted(ch.C):
            X = []
            for cand in _all_completions(L, k):
                for B in with_empty(other.paths):
                    if alg_demands(_edges_of(cand) + _edges_of(B), C):
                        X.append(cand)
                        break
            choice_sets.append(_minimal_completions(X) if reduce else sorted(set(X)))
    # second part: terminal pairs split between the children
    for c1 in sorted(ch1.P, key=repr):
        for c2 in sorted(ch2.P, key=repr):
            need = min(c1.req, c2.req)
            base = []
            base += [(-1, x) for x, a in zip(L1, c1.A) for _ in range(a)]
            base += [(-2, x) for x, a in zip(L2, c2.A) for _ in range(a)]
            base += _edges_of(c1.B) + _edges_of(c2.B)
            com = [
                cand
                for cand in _all_completions(L, k)
                if alg_demands(base + _edges_of(cand), [(-1, -2, need)])
            ]
            choice_sets.append(_minimal_completions(com) if reduce else sorted(set(com)))
    # configurations generalised to L
    config_sets = []
    for i, ch in ((1, ch1), (2, ch2)):
        Li = L1 if i == 1 else L2
        other = ch2 if i == 1 else ch1
        for conf in sorted(ch.P, key=repr):
            Y = []
            for A in product(range(k + 1), repeat=len(L)):
                if outside_reqs and any(sum(A) < min(conf.req, ru) for ru in outside_reqs):
                    continue
                for Bstar in _all_completions(L, k):
                    dem = [(star[0], x, a) for x, a in zip(L, A)] + list(Bstar)
                    for Bp in with_empty(other.paths):
                        H = [(star[0], x) for x, a in zip(Li, conf.A) for _ in range(a)]
                        H += _edges_of(conf.B) + _edges_of(Bp)
                        if alg_demands(H, dem):
                            Y.append(Configuration(A, frozenset(Bstar), conf.req))
                            break
            config_sets.append(_maximal_configs(Y) if reduce else sorted(set(Y), key=repr))
    # merged path sets
    path_h = set()
    for B1 in with_empty(ch1.paths):
        for B2 in with_empty(ch2.paths):
            H = _edges_of(B1) + _edges_of(B2)
            for cand in _all_completions(L, k):
                if cand and alg_demands(H, cand):
                    path_h.add(frozenset(cand))
    path_h = frozenset(path_h)
    if any(not s for s in choice_sets) or any(not s for s in config_sets):
        return set()
    out = set()
    for cs in product(*choice_sets):
        for ps in product(*config_sets):
            out.add(Characteristic(frozenset(cs), frozenset(ps), path_h))
    return out
