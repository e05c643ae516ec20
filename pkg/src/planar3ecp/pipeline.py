"""End-to-end approximation: spanner, slices, per-slice exact DP, recombination.

Each slice is solved exactly by the branch DP when its heuristic
decomposition stays within ``width_cap`` and the state budget; otherwise
the slice falls back to a greedy minimal solution on ``k`` copies of its
edges.  Fallbacks keep feasibility, cost only quality, and are counted in
the stats.  The recombined solution is pruned to a minimal one and mapped
back to the input graph.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .branch.decomposition import decompose
from .branch.dp import DPBudgetExceeded, dp_solve
from .connectivity import InfeasibleError, is_feasible, minimalize, violated_pair
from .graph import EmbeddedMultigraph, MultiSolution, as_requirements
from .mortar import _check_eps
from .slicing import assign_artificial_terminals, recombine, slice_graph, slice_requirements
from .spanner import spanner_for

log = logging.getLogger(__name__)

DEFAULT_WIDTH_CAP = 4
DEFAULT_STATE_BUDGET = 400_000


class StageError(RuntimeError):
    """A pipeline stage failed; ``stage`` names it."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


@dataclass
class PipelineConfig:
    epsilon: Fraction = Fraction(1, 2)
    k: int = 3
    theta: int | None = None
    eta: int | None = None
    width_cap: int = DEFAULT_WIDTH_CAP
    state_budget: int | None = DEFAULT_STATE_BUDGET
    seed: int = 0
    prune: bool = True

    def __post_init__(self):
        self.epsilon = _check_eps(self.epsilon)
        if not 1 <= self.k <= 3:
            raise ValueError("k must be 1, 2 or 3")
        if self.theta is not None and self.theta < 1:
            raise ValueError("theta must be positive")
        if self.eta is not None and self.eta < 2:
            raise ValueError("eta must be at least 2")
        if self.width_cap < 1:
            raise ValueError("width cap must be positive")

    @property
    def max_levels(self) -> int:
        """Largest number of dual levels per slice tried: ``ceil(1/epsilon)``, at least 2."""
        if self.eta is not None:
            return self.eta
        return max(2, math.ceil(1 / self.epsilon))


@dataclass
class PipelineResult:
    solution: MultiSolution | None
    weight: Fraction | None
    status: str  # ok | infeasible
    stats: dict = field(default_factory=dict)


def _solve_slice(sg: EmbeddedMultigraph, s, r, cfg: PipelineConfig) -> tuple[dict[int, int], dict]:
    """Solution on one slice as ``{sg edge id: multiplicity}`` plus a report."""
    req = slice_requirements(sg, s, r)
    rep = {"slice": s.id, "edges": len(s.edges), "terminals": sum(1 for x in req if x > 0)}
    if sum(1 for x in req if x > 0) < 2 or not s.edges:
        rep.update(method="empty", width=0)
        return {}, rep
    own = sorted(s.edges)
    local = sg.subgraph(own)
    bd = decompose(local, seed=cfg.seed)
    rep["width"] = bd.width
    sol = None
    if bd.width <= cfg.width_cap:
        try:
            res = dp_solve(local, req, cfg.k, bd, state_budget=cfg.state_budget)
        except DPBudgetExceeded:
            rep["method"] = "fallback-budget"
        else:
            if res.status == "optimal":
                sol = res.solution
                rep["method"] = "dp"
                rep["states"] = res.stats.get("max_states", 0)
            else:
                rep["method"] = "infeasible"
    else:
        rep["method"] = "fallback-width"
    if sol is None:
        full = MultiSolution.from_vector([cfg.k] * local.m, cfg.k)
        if not is_feasible(local, full, req):
            # the slice cannot serve its terminals alone; the recombination
            # check decides whether the neighbours make up for it
            rep["method"] = "infeasible"
            sol = full
        else:
            sol = minimalize(local, full, req)
    rep["weight"] = sol.weight(local)
    return {own[e]: c for e, c in sol.mult.items()}, rep


def _slice_width(sg: EmbeddedMultigraph, s, seed: int) -> int:
    if not s.edges:
        return 0
    return decompose(sg.subgraph(sorted(s.edges)), seed=seed).width


def choose_slicing(sg: EmbeddedMultigraph, r, cfg: PipelineConfig):
    """Slices with the most levels per slice whose widths all fit the cap.

    Thicker slices mean fewer artificial terminals, so ``eta`` is lowered
    from ``cfg.max_levels`` only as far as the exact DP needs; an explicit
    ``cfg.eta`` is used as given.
    """
    if cfg.eta is not None:
        return slice_graph(sg, cfg.eta)
    res = None
    for eta in range(cfg.max_levels, 1, -1):
        res = slice_graph(sg, eta)
        if all(_slice_width(sg, s, cfg.seed) <= cfg.width_cap for s in res.slices):
            return res
    return res


def solve(g: EmbeddedMultigraph, r, cfg: PipelineConfig | None = None) -> PipelineResult:
    """Run the whole pipeline on ``(g, r)``; the result is checked for feasibility."""
    cfg = cfg or PipelineConfig()
    r = as_requirements(r, g.n)
    stats: dict = {"epsilon": str(cfg.epsilon), "k": cfg.k, "width_cap": cfg.width_cap}
    terms = r.terminals
    if len(terms) < 2:
        sol = MultiSolution({}, cfg.k)
        stats.update(final_weight=Fraction(0), slices=[])
        return PipelineResult(sol, Fraction(0), "ok", stats)
    if max(r) > cfg.k or not is_feasible(g, [cfg.k] * g.m, r):
        return PipelineResult(None, None, "infeasible", stats)

    try:
        mg, bricks, sp = spanner_for(g, r, cfg.epsilon, cfg.theta)
    except Exception as exc:  # noqa: BLE001 - tagged and re-raised
        raise StageError("spanner", str(exc)) from exc
    sg = sp.graph(g)
    stats["spanner"] = dict(sp.stats)
    stats["spanner_ratio"] = sp.stats["ratio"]

    try:
        res = choose_slicing(sg, r, cfg)
        assign_artificial_terminals(sg, res.slices, r)
    except Exception as exc:  # noqa: BLE001
        raise StageError("slice", str(exc)) from exc
    stats["eta"] = res.eta
    stats["boundary_weight"] = res.boundary_weight
    stats["offset"] = res.offset

    parts = []
    reports = []
    for s in res.slices:
        try:
            part, rep = _solve_slice(sg, s, r, cfg)
        except Exception as exc:  # noqa: BLE001
            raise StageError("dp", f"slice {s.id}: {exc}") from exc
        rep["artificial_terminals"] = {str(v): a for v, a in sorted(s.artificial_terminals.items())}
        parts.append(part)
        reports.append(rep)
    stats["slices"] = reports
    stats["slice_widths"] = [rep.get("width", 0) for rep in reports]
    stats["fallback_slices"] = sum(1 for rep in reports if rep["method"].startswith("fallback"))

    try:
        merged, rule = recombine(sg, parts, r, cfg.k)
    except InfeasibleError as exc:
        raise StageError("recombine", str(exc)) from exc
    stats["recombine_rule"] = rule
    stats["recombined_weight"] = merged.weight(sg)
    if cfg.prune:
        merged = minimalize(sg, merged, r)
    sol = MultiSolution({sg.parent_edge[e]: c for e, c in merged.mult.items()}, cfg.k)
    bad = violated_pair(g, sol, r)
    if bad is not None:
        u, v, need, have = bad
        raise StageError("verify", f"{have} < {need} paths between {u} and {v}")
    w = sol.weight(g)
    stats["final_weight"] = w
    return PipelineResult(sol, w, "ok", stats)


__all__ = ["PipelineConfig", "PipelineResult", "StageError", "choose_slicing", "solve", "DEFAULT_WIDTH_CAP"]
