"""Command line front end: ``planar3ecp GRAPH --mode solve|dp|oracle|lab|spanner-stats``.

Stats are printed as JSON with sorted keys and exact rationals written as
strings, so equal inputs give byte-identical output.  Exit codes: 0 ok,
2 infeasible, 3 budget exceeded, 4 bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .branch.decomposition import WidthExceeded, decompose
from .branch.dp import DPBudgetExceeded, dp_solve
from .connectivity import InfeasibleError, is_feasible, is_vertex_feasible, minimalize_vertex
from .graph import EmbeddingError
from .io import FormatError, load_graph, read_graph, write_solution, write_spanner
from .lab import (
    TheoremReport,
    check_connecting_path_terminal,
    check_cycle_terminal,
    check_two_terminals_per_cycle,
    run_lab,
)
from .mortar import _check_eps, brick_report
from .oracle import DEFAULT_MAX_SLOTS, exact_solve
from .pipeline import DEFAULT_STATE_BUDGET, DEFAULT_WIDTH_CAP, PipelineConfig, StageError, solve
from .spanner import spanner_for

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_BUDGET = 3
EXIT_BAD_INPUT = 4

MODES = ("solve", "dp", "oracle", "lab", "spanner-stats")


class BadInput(ValueError):
    pass


def jsonable(x):
    """Exact, deterministic JSON view: rationals become strings, keys strings."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [jsonable(v) for v in items]
    return x


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="planar3ecp", description=__doc__.splitlines()[0])
    p.add_argument("graph", nargs="?", help="graph file; lab mode without it runs the bundled fixtures")
    p.add_argument("--mode", choices=MODES, default="solve")
    p.add_argument("--epsilon", type=_fraction_arg, default=Fraction(1, 2))
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--theta", type=int, default=None, help="portals per brick (default from epsilon)")
    p.add_argument("--eta", type=int, default=None, help="dual levels per slice (default adaptive)")
    p.add_argument("--width-cap", type=int, default=DEFAULT_WIDTH_CAP)
    p.add_argument("--state-budget", type=int, default=DEFAULT_STATE_BUDGET)
    p.add_argument("--budget", type=int, default=2_000_000, help="oracle search nodes")
    p.add_argument("--oracle", action="store_true", help="always compare with the oracle in solve mode")
    p.add_argument("--instances", type=int, default=0, help="random lab instances per property")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="solution (or spanner) output file")
    p.add_argument("--stats", default=None, help="write the stats JSON here instead of stdout")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _config(args) -> PipelineConfig:
    try:
        return PipelineConfig(
            epsilon=args.epsilon,
            k=args.k,
            theta=args.theta,
            eta=args.eta,
            width_cap=args.width_cap,
            state_budget=args.state_budget,
            seed=args.seed,
        )
    except ValueError as exc:
        raise BadInput(str(exc)) from exc


def _load(args):
    if args.graph is None:
        raise BadInput("a graph file is required in this mode")
    try:
        return load_graph(args.graph)
    except OSError as exc:
        raise BadInput(f"cannot read {args.graph}: {exc}") from exc


def _oracle_json(g, r, k, budget, max_slots=DEFAULT_MAX_SLOTS):
    res = exact_solve(g, r, k, budget=budget, max_slots=max_slots)
    return res, {"status": res.status, "weight": res.weight, "nodes_explored": res.nodes_explored}


def cmd_solve(args) -> tuple[int, dict, str | None]:
    cfg = _config(args)
    g, r = _load(args)
    try:
        res = solve(g, r, cfg)
    except StageError as exc:
        return EXIT_INFEASIBLE if exc.stage in ("recombine", "verify") else EXIT_BUDGET, {
            "mode": "solve", "status": "error", "stage": exc.stage, "message": str(exc)}, None
    stats = {"mode": "solve", "status": res.status, "n": g.n, "m": g.m, "terminals": len(r.terminals)}
    if res.status != "ok":
        return EXIT_INFEASIBLE, stats, None
    stats.update(res.stats)
    stats["weight"] = res.weight
    stats["feasible"] = is_feasible(g, res.solution, r)
    if args.oracle or cfg.k * g.m <= DEFAULT_MAX_SLOTS:
        o, oj = _oracle_json(g, r, cfg.k, args.budget, None)
        if o.weight:
            oj["ratio"] = res.weight / o.weight
        stats["oracle"] = oj
    return EXIT_OK, stats, write_solution(g, res.solution)


def cmd_dp(args):
    cfg = _config(args)
    g, r = _load(args)
    stats = {"mode": "dp", "n": g.n, "m": g.m}
    try:
        bd = decompose(g, width_cap=cfg.width_cap, seed=cfg.seed) if g.m else None
        res = dp_solve(g, r, cfg.k, bd, state_budget=cfg.state_budget)
    except (WidthExceeded, DPBudgetExceeded) as exc:
        stats.update(status="budget", message=str(exc))
        return EXIT_BUDGET, stats, None
    stats.update(status=res.status, weight=res.weight, width=res.width)
    stats.update({k: v for k, v in res.stats.items() if k in ("max_states", "total_states", "upper_bound")})
    if res.status != "optimal":
        return EXIT_INFEASIBLE, stats, None
    return EXIT_OK, stats, write_solution(g, res.solution)


def cmd_oracle(args):
    g, r = _load(args)
    if not 1 <= args.k <= 3:
        raise BadInput("k must be 1, 2 or 3")
    try:
        res, oj = _oracle_json(g, r, args.k, args.budget, None)
    except ValueError as exc:
        raise BadInput(str(exc)) from exc
    stats = {"mode": "oracle", "n": g.n, "m": g.m, **oj}
    if res.status == "unknown":
        return EXIT_BUDGET, stats, None
    if res.status == "infeasible":
        return EXIT_INFEASIBLE, stats, None
    return EXIT_OK, stats, write_solution(g, res.solution)


def bundled_fixtures() -> list[tuple[str, str]]:
    root = resources.files("planar3ecp") / "fixtures"
    return sorted((p.name, p.read_text()) for p in root.iterdir() if p.name.endswith(".graph"))


def lab_on_graph(g, r) -> dict[str, TheoremReport]:
    """All checks on the vertex-minimalized version of ``(g, r)``."""
    reports = {
        "cycle-terminal": TheoremReport("cycle-terminal"),
        "two-terminals-per-cycle": TheoremReport("two-terminals-per-cycle"),
        "connecting-path-terminal": TheoremReport("connecting-path-terminal"),
    }
    terms = r.terminals
    if len(terms) < 2 or not is_vertex_feasible(g, range(g.m), r):
        return reports
    sub = minimalize_vertex(g, range(g.m), r)
    if set(r[t] for t in terms) <= {2, 3}:
        reports["cycle-terminal"].merge(check_cycle_terminal(g, r, sub))
    if all(r[t] == 3 for t in terms):
        reports["two-terminals-per-cycle"].merge(check_two_terminals_per_cycle(g, terms, sub))
    if g.n <= 9:
        for i, x in enumerate(terms):
            for y in terms[i + 1:]:
                reports["connecting-path-terminal"].merge(check_connecting_path_terminal(g, r, sub, x, y))
    return reports


def cmd_lab(args):
    reports = {
        "cycle-terminal": TheoremReport("cycle-terminal"),
        "two-terminals-per-cycle": TheoremReport("two-terminals-per-cycle"),
        "connecting-path-terminal": TheoremReport("connecting-path-terminal"),
    }
    if args.graph is not None:
        sources = [(Path(args.graph).name, Path(args.graph).read_text())]
    else:
        sources = bundled_fixtures()
    names = []
    for name, text in sources:
        g, r = read_graph(text)
        if g.n > 10:
            continue
        names.append(name)
        for key, rep in lab_on_graph(g, r).items():
            reports[key].merge(rep)
    if args.instances:
        for key, rep in run_lab(args.instances, args.seed).items():
            reports[key].merge(rep)
    stats = {
        "mode": "lab",
        "fixtures": names,
        "random_instances": args.instances,
        "reports": [rep.as_json() for rep in reports.values()],
    }
    stats["violations"] = sum(len(rep.violations) for rep in reports.values())
    return EXIT_OK, stats, None


def cmd_spanner_stats(args):
    eps = _check_eps(args.epsilon)
    g, r = _load(args)
    mg, bricks, sp = spanner_for(g, r, eps, args.theta)
    stats = {"mode": "spanner-stats", "n": g.n, "m": g.m, "theta": sp.stats["theta"]}
    stats["mortar"] = brick_report(g, mg, bricks, r, sp.stats["theta"])
    stats["spanner"] = sp.stats
    return EXIT_OK, stats, write_spanner(g, r, mg.edges, sp.trees)


COMMANDS = {
    "solve": cmd_solve,
    "dp": cmd_dp,
    "oracle": cmd_oracle,
    "lab": cmd_lab,
    "spanner-stats": cmd_spanner_stats,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        code, stats, payload = COMMANDS[args.mode](args)
    except (BadInput, FormatError, EmbeddingError) as exc:
        print(f"planar3ecp: bad input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except InfeasibleError as exc:
        print(f"planar3ecp: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    text = dumps(stats)
    if args.stats:
        Path(args.stats).write_text(text)
    else:
        sys.stdout.write(text)
    if payload is not None and args.out:
        Path(args.out).write_text(payload)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
