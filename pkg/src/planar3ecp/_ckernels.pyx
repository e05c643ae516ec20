# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
# distutils: language = c++
"""Compiled hot kernels: unit-augmenting max flow and disk Steiner subset DP.

Mirrors ``_pykernels`` exactly; see that module for the algorithms.
"""

import numpy as np

from libcpp.pair cimport pair
from libcpp.queue cimport priority_queue
from libcpp.vector cimport vector

ctypedef long long i64

cdef i64 INF = 1LL << 60


cdef class FlowNetwork:
    cdef public int n
    cdef public int narcs
    cdef int[::1] head
    cdef int[::1] start
    cdef int[::1] arcs
    cdef int[::1] res
    cdef int[::1] pred
    cdef int[::1] queue

    def __init__(self, int n, tails, heads):
        cdef int i, u, v
        tails = [int(x) for x in tails]
        heads = [int(x) for x in heads]
        self.n = n
        self.narcs = 2 * len(tails)
        self.head = np.zeros(self.narcs, dtype=np.int32)
        deg = [0] * (n + 1)
        for i in range(len(tails)):
            u = tails[i]
            v = heads[i]
            self.head[2 * i] = v
            self.head[2 * i + 1] = u
            deg[u + 1] += 1
            deg[v + 1] += 1
        for i in range(n):
            deg[i + 1] += deg[i]
        self.start = np.asarray(deg, dtype=np.int32)
        fill = list(deg[:n])
        self.arcs = np.zeros(self.narcs, dtype=np.int32)
        for i in range(len(tails)):
            u = tails[i]
            v = heads[i]
            self.arcs[fill[u]] = 2 * i
            fill[u] += 1
            self.arcs[fill[v]] = 2 * i + 1
            fill[v] += 1
        self.res = np.zeros(max(self.narcs, 1), dtype=np.int32)
        self.pred = np.zeros(max(n, 1), dtype=np.int32)
        self.queue = np.zeros(max(n, 1), dtype=np.int32)

    cdef int _flow(self, int s, int t, i64 limit):
        cdef int flow = 0, qh, qt, u, v, a, k, push
        cdef bint found
        if s == t:
            raise ValueError("source equals sink")
        while flow < limit:
            for k in range(self.n):
                self.pred[k] = -1
            self.pred[s] = -2
            qh = 0
            qt = 0
            self.queue[qt] = s
            qt += 1
            found = False
            while qh < qt and not found:
                u = self.queue[qh]
                qh += 1
                for k in range(self.start[u], self.start[u + 1]):
                    a = self.arcs[k]
                    if self.res[a] > 0:
                        v = self.head[a]
                        if self.pred[v] == -1:
                            self.pred[v] = a
                            if v == t:
                                found = True
                                break
                            self.queue[qt] = v
                            qt += 1
            if not found:
                break
            push = <int>min(limit - flow, 1 << 30)
            v = t
            while v != s:
                a = self.pred[v]
                if self.res[a] < push:
                    push = self.res[a]
                v = self.head[a ^ 1]
            v = t
            while v != s:
                a = self.pred[v]
                self.res[a] -= push
                self.res[a ^ 1] += push
                v = self.head[a ^ 1]
            flow += push
        return flow

    cdef void _load(self, caps):
        cdef int i
        cdef int[::1] c
        if isinstance(caps, np.ndarray) and caps.dtype == np.int32 and caps.flags.c_contiguous:
            c = caps
            for i in range(self.narcs):
                self.res[i] = c[i]
        else:
            for i in range(self.narcs):
                self.res[i] = caps[i]

    def max_flow(self, caps, int s, int t, limit=None):
        cdef i64 lim = INF if limit is None else limit
        self._load(caps)
        return self._flow(s, t, lim)

    def feasible(self, caps, terms, reqs):
        cdef int nt = len(terms), i, j, k, need, deg
        cdef int[::1] base = np.zeros(max(self.narcs, 1), dtype=np.int32)
        cdef int[::1] tm = np.asarray(terms, dtype=np.int32)
        cdef int[::1] rq = np.asarray(reqs, dtype=np.int32)
        self._load(caps)
        for k in range(self.narcs):
            base[k] = self.res[k]
        for i in range(nt):
            need = 0
            for j in range(nt):
                if j != i:
                    need = max(need, min(rq[i], rq[j]))
            deg = 0
            for k in range(self.start[tm[i]], self.start[tm[i] + 1]):
                deg += base[self.arcs[k]]
            if deg < need:
                return False
        for i in range(nt):
            for j in range(i + 1, nt):
                need = min(rq[i], rq[j])
                if need <= 0:
                    continue
                for k in range(self.narcs):
                    self.res[k] = base[k]
                if self._flow(tm[i], tm[j], need) < need:
                    return False
        return True


def steiner_all_subsets(int nv, eu, ev, w, terms):
    cdef int s = len(terms), m = len(eu)
    cdef int size = 1 << s
    cdef int mask, a, v, u, e, k, i, c, L, low, rest, root, sub, b, full
    cdef i64 x, d, nd
    cdef int[::1] EU = np.asarray(eu, dtype=np.int32)
    cdef int[::1] EV = np.asarray(ev, dtype=np.int32)
    cdef i64[::1] W = np.asarray(w, dtype=np.int64)
    cdef int[::1] T = np.asarray(terms, dtype=np.int32)
    cdef i64[:, ::1] dp = np.full((size, max(nv, 1)), INF, dtype=np.int64)
    cdef int[:, ::1] bp = np.full((size, max(nv, 1)), -3, dtype=np.int32)
    # CSR adjacency
    cdef int[::1] start = np.zeros(nv + 1, dtype=np.int32)
    cdef int[::1] nb = np.zeros(max(2 * m, 1), dtype=np.int32)
    cdef int[::1] ne = np.zeros(max(2 * m, 1), dtype=np.int32)
    cdef int[::1] fill = np.zeros(nv + 1, dtype=np.int32)
    cdef vector[int] members
    cdef vector[int] splits
    cdef priority_queue[pair[i64, int]] heap
    cdef pair[i64, int] top
    for e in range(m):
        start[EU[e] + 1] += 1
        start[EV[e] + 1] += 1
    for v in range(nv):
        start[v + 1] += start[v]
    for v in range(nv):
        fill[v] = start[v]
    for e in range(m):
        nb[fill[EU[e]]] = EV[e]
        ne[fill[EU[e]]] = e
        fill[EU[e]] += 1
        nb[fill[EV[e]]] = EU[e]
        ne[fill[EV[e]]] = e
        fill[EV[e]] += 1
    for mask in range(1, size):
        members.clear()
        for i in range(s):
            if (mask >> i) & 1:
                members.push_back(1 << i)
        c = members.size()
        if c == 1:
            v = T[__builtin_ctz(mask)]
            dp[mask, v] = 0
            bp[mask, v] = -1
        else:
            splits.clear()
            for i in range(c):
                a = 0
                for L in range(1, c):
                    a |= members[(i + L - 1) % c]
                    if a < (mask ^ a):
                        splits.push_back(a)
            for k in range(<int>splits.size()):
                a = splits[k]
                for v in range(nv):
                    x = dp[a, v] + dp[mask ^ a, v]
                    if x < dp[mask, v]:
                        dp[mask, v] = x
                        bp[mask, v] = -2 - a
        for v in range(nv):
            if dp[mask, v] < INF:
                heap.push(pair[i64, int](-dp[mask, v], v))
        while not heap.empty():
            top = heap.top()
            heap.pop()
            d = -top.first
            u = top.second
            if d > dp[mask, u]:
                continue
            for k in range(start[u], start[u + 1]):
                v = nb[k]
                e = ne[k]
                nd = d + W[e]
                if nd < dp[mask, v]:
                    dp[mask, v] = nd
                    bp[mask, v] = e
                    heap.push(pair[i64, int](-nd, v))
    cost = [0] * size
    trees = [()] * size
    cdef vector[pair[int, int]] stack
    cdef pair[int, int] item
    for mask in range(1, size):
        low = mask & -mask
        if low == mask:
            continue
        root = T[__builtin_ctz(mask)]
        rest = mask ^ low
        if dp[rest, root] >= INF:
            cost[mask] = -1
            trees[mask] = None
            continue
        cost[mask] = dp[rest, root]
        edges = set()
        stack.clear()
        stack.push_back(pair[int, int](rest, root))
        while not stack.empty():
            item = stack.back()
            stack.pop_back()
            sub = item.first
            v = item.second
            b = bp[sub, v]
            if b == -1:
                continue
            if b >= 0:
                edges.add(b)
                stack.push_back(pair[int, int](sub, EU[b] if EV[b] == v else EV[b]))
            else:
                a = -2 - b
                stack.push_back(pair[int, int](a, v))
                stack.push_back(pair[int, int](sub ^ a, v))
        trees[mask] = tuple(sorted(edges))
    return cost, trees


cdef extern from *:
    int __builtin_ctz(unsigned int x)
