"""Compare the compiled and pure-Python kernels on the same inputs.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--json]

Workloads:
* flow-feasible: all-pairs terminal feasibility on grid graphs with random
  multiplicities, the query the oracle and minimalization issue most;
* max-flow: single-pair flow between opposite grid corners;
* steiner-subsets: all-subsets Steiner costs on a wheel-like disk graph.

Both backends must return identical answers; the script exits non-zero
otherwise.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

import numpy as np

from planar3ecp import kernels


def grid_arcs(rows, cols):
    tails, heads = [], []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                tails += [v, v + 1]
                heads += [v + 1, v]
            if r + 1 < rows:
                tails += [v, v + cols]
                heads += [v + cols, v]
    return rows * cols, tails, heads


def cap_vectors(narcs, count, rng):
    out = []
    for _ in range(count):
        caps = []
        for _ in range(narcs // 4):  # one undirected edge is two arc pairs
            c = rng.randint(1, 3)
            caps += [c, 0, c, 0]
        out.append(np.asarray(caps, dtype=np.int32))
    return out


def bench_flow(mod, size, vectors, feasible):
    n, tails, heads = grid_arcs(size, size)
    net = mod.FlowNetwork(n, tails, heads)
    terms = [0, size - 1, n - size, n - 1]
    reqs = [3, 3, 3, 3]
    answers = []
    t0 = time.perf_counter()
    for caps in vectors:
        if feasible:
            answers.append(bool(net.feasible(caps.copy(), terms, reqs)))
        else:
            answers.append(int(net.max_flow(caps.copy(), 0, n - 1)))
    return time.perf_counter() - t0, answers


def bench_steiner(mod, rim, seeds):
    answers = []
    t0 = time.perf_counter()
    for seed in seeds:
        rng = random.Random(seed)
        eu = list(range(rim)) + list(range(rim))
        ev = [(i + 1) % rim for i in range(rim)] + [rim] * rim
        w = [rng.randint(1, 9) for _ in eu]
        terms = list(range(0, rim, 2))
        cost, _ = mod.steiner_all_subsets(rim + 1, eu, ev, w, terms)
        answers.append(list(cost))
    return time.perf_counter() - t0, answers


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    mods = kernels.backends()
    if "cython" not in mods:
        print("compiled kernels not built; only the pure-Python backend is available", file=sys.stderr)
    rng = random.Random(0)
    workloads = []
    for size in (4, 6, 8):
        n, tails, _ = grid_arcs(size, size)
        vecs = cap_vectors(2 * len(tails), 200, rng)
        workloads.append((f"flow-feasible grid{size}x{size}", lambda m, s=size, v=vecs: bench_flow(m, s, v, True)))
        workloads.append((f"max-flow grid{size}x{size}", lambda m, s=size, v=vecs: bench_flow(m, s, v, False)))
    for rim in (10, 14):
        workloads.append((f"steiner-subsets wheel{rim}", lambda m, r=rim: bench_steiner(m, r, range(20))))

    rows = []
    ok = True
    for name, fn in workloads:
        times = {}
        answers = {}
        for key, mod in mods.items():
            best = None
            for _ in range(args.repeat):
                t, ans = fn(mod)
                best = t if best is None else min(best, t)
            times[key] = best
            answers[key] = ans
        agree = len({json.dumps(a) for a in answers.values()}) == 1
        ok &= agree
        row = {"workload": name, "agree": agree, **{f"{k}_s": round(v, 5) for k, v in times.items()}}
        if "cython" in times and times["cython"] > 0:
            row["speedup"] = round(times["python"] / times["cython"], 1)
        rows.append(row)

    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'workload':32} {'python s':>10} {'cython s':>10} {'speedup':>8} agree")
        for row in rows:
            print(
                f"{row['workload']:32} {row['python_s']:>10.4f} {row.get('cython_s', float('nan')):>10.4f}"
                f" {row.get('speedup', float('nan')):>8} {row['agree']}"
            )
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
