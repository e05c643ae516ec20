"""Pure-Python hot kernels; the compiled ``_ckernels`` module mirrors this API."""

from __future__ import annotations

from collections import deque

INF = 1 << 60


def _ints(seq):
    return seq.tolist() if hasattr(seq, "tolist") else list(seq)


class FlowNetwork:
    """Unit-augmenting max flow on a fixed arc structure.

    Arc pair ``i`` consists of arc ``2i`` (``tails[i] -> heads[i]``) and its
    residual partner ``2i+1``.  Capacities are given per arc for each query,
    so one network serves many multiplicity vectors.
    """

    def __init__(self, n, tails, heads):
        self.n = int(n)
        tails = [int(x) for x in tails]
        heads = [int(x) for x in heads]
        self.narcs = 2 * len(tails)
        self.head = [0] * self.narcs
        adj = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(zip(tails, heads)):
            self.head[2 * i] = v
            self.head[2 * i + 1] = u
            adj[u].append(2 * i)
            adj[v].append(2 * i + 1)
        self.adj = adj

    def max_flow(self, caps, s, t, limit=None):
        """Flow value from ``s`` to ``t``, stopping once ``limit`` is reached."""
        return self._flow(_ints(caps), s, t, INF if limit is None else limit)

    def _flow(self, res, s, t, limit):
        if s == t:
            raise ValueError("source equals sink")
        head, adj = self.head, self.adj
        flow = 0
        n = self.n
        while flow < limit:
            pred = [-1] * n
            pred[s] = -2
            q = deque([s])
            found = False
            while q and not found:
                u = q.popleft()
                for a in adj[u]:
                    if res[a] > 0:
                        v = head[a]
                        if pred[v] == -1:
                            pred[v] = a
                            if v == t:
                                found = True
                                break
                            q.append(v)
            if not found:
                break
            # bottleneck augmentation
            push = limit - flow
            v = t
            while v != s:
                a = pred[v]
                if res[a] < push:
                    push = res[a]
                v = head[a ^ 1]
            v = t
            while v != s:
                a = pred[v]
                res[a] -= push
                res[a ^ 1] += push
                v = head[a ^ 1]
            flow += push
        return flow

    def feasible(self, caps, terms, reqs):
        """True iff every terminal pair has flow at least the smaller requirement."""
        caps = _ints(caps)
        terms = _ints(terms)
        reqs = _ints(reqs)
        nt = len(terms)
        # degree screen first: it catches most infeasible vectors cheaply
        for i in range(nt):
            need = 0
            for j in range(nt):
                if j != i:
                    need = max(need, min(reqs[i], reqs[j]))
            deg = 0
            for a in self.adj[terms[i]]:
                deg += caps[a]
            if deg < need:
                return False
        for i in range(nt):
            for j in range(i + 1, nt):
                need = min(reqs[i], reqs[j])
                if need <= 0:
                    continue
                if self._flow(list(caps), terms[i], terms[j], need) < need:
                    return False
        return True



def _block_splits(members):
    """Unordered splits of a cyclic sequence of bits into two contiguous blocks."""
    c = len(members)
    full = 0
    for b in members:
        full |= b
    out = []
    for i in range(c):
        a = 0
        for L in range(1, c):
            a |= members[(i + L - 1) % c]
            rest = full ^ a
            if a < rest:
                out.append(a)
    return out


def steiner_all_subsets(nv, eu, ev, w, terms):
    """Minimum Steiner trees for every subset of ``terms`` in a disk graph.

    ``terms`` must appear in this cyclic order on the outer face, so every
    optimal tree splits at a vertex into subtrees covering contiguous blocks
    of its terminals; only those splits are tried.  Returns ``(cost, trees)``
    indexed by subset bitmask; unreachable subsets get cost ``-1`` and tree
    ``None``.
    """
    import heapq

    eu, ev, w, terms = _ints(eu), _ints(ev), _ints(w), _ints(terms)
    s = len(terms)
    m = len(eu)
    adj = [[] for _ in range(nv)]
    for e in range(m):
        adj[eu[e]].append((ev[e], e))
        adj[ev[e]].append((eu[e], e))
    size = 1 << s
    dp = [None] * size
    bp = [None] * size
    for mask in range(1, size):
        members = [1 << i for i in range(s) if mask >> i & 1]
        cur = [INF] * nv
        back = [-3] * nv
        if len(members) == 1:
            t = terms[members[0].bit_length() - 1]
            cur[t] = 0
            back[t] = -1
        else:
            for a in _block_splits(members):
                da, db = dp[a], dp[mask ^ a]
                for v in range(nv):
                    x = da[v] + db[v]
                    if x < cur[v]:
                        cur[v] = x
                        back[v] = -2 - a
        heap = [(cur[v], v) for v in range(nv) if cur[v] < INF]
        heapq.heapify(heap)
        while heap:
            d, u = heapq.heappop(heap)
            if d > cur[u]:
                continue
            for v, e in adj[u]:
                nd = d + w[e]
                if nd < cur[v]:
                    cur[v] = nd
                    back[v] = e
                    heapq.heappush(heap, (nd, v))
        dp[mask] = cur
        bp[mask] = back
    cost = [0] * size
    trees = [()] * size
    for mask in range(1, size):
        low = (mask & -mask)
        if low == mask:
            continue
        root = terms[low.bit_length() - 1]
        rest = mask ^ low
        if dp[rest][root] >= INF:
            cost[mask] = -1
            trees[mask] = None
            continue
        cost[mask] = dp[rest][root]
        edges = []
        stack = [(rest, root)]
        while stack:
            sub, v = stack.pop()
            b = bp[sub][v]
            if b == -1:
                continue
            if b >= 0:
                edges.append(b)
                stack.append((sub, eu[b] if ev[b] == v else ev[b]))
            else:
                a = -2 - b
                stack.append((a, v))
                stack.append((sub ^ a, v))
        trees[mask] = tuple(sorted(set(edges)))
    return cost, trees
