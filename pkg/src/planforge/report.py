"""Optimization reports and the termination/progress bookkeeping shared by
every optimizer.

An optimizer run records an *event* each time a population member (keyed
by plan in discrete search, by learner index in cost-space search) reaches
a new lowest query cost. ``iterations_to_topk_for(k, qc)`` replays those
events, so one run answers every (K, QC) question without rerunning.
"""

import json
import math
from dataclasses import asdict, dataclass, field

from .errors import ValidationError

__all__ = ["RankedPlan", "OptimizationReport", "ProgressTracker", "check_termination"]


@dataclass(frozen=True)
class RankedPlan:
    plan: tuple
    qac: float
    qlc: float
    lpc: float
    control_site: int
    fitness: float       # algorithm-native objective
    query_cost: float    # sphere fitness, comparable across algorithms

    def to_dict(self):
        d = asdict(self)
        d["plan"] = list(self.plan)
        return d


@dataclass
class OptimizationReport:
    algorithm: str
    mode: str
    config: dict
    ranked: list
    best: RankedPlan
    trace: list
    events: list
    iterations: int
    evaluations: int
    termination_reason: str
    iterations_to_topk: int | None = None

    def iterations_to_topk_for(self, k, qc=math.inf):
        """First iteration at which ``k`` distinct keys had query cost <= ``qc``."""
        hit = set()
        for it, key, cost in self.events:
            if cost <= qc:
                hit.add(key)
                if len(hit) >= k:
                    return it
        return None

    def snapshot(self, iteration):
        """Trace row for ``iteration`` (clamped to the last completed one)."""
        return self.trace[min(iteration, len(self.trace) - 1)]

    def to_dict(self):
        return {
            "algorithm": self.algorithm,
            "mode": self.mode,
            "config": self.config,
            "iterations": self.iterations,
            "evaluations": self.evaluations,
            "termination_reason": self.termination_reason,
            "iterations_to_topk": self.iterations_to_topk,
            "best": self.best.to_dict(),
            "ranked": [dict(rank=i + 1, **p.to_dict()) for i, p in enumerate(self.ranked)],
            "trace": self.trace,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def check_termination(max_iterations, top_k, qc_threshold, stagnation_window):
    if int(max_iterations) != max_iterations or max_iterations < 1:
        raise ValidationError("max_iterations must be a positive integer")
    if top_k is not None and (int(top_k) != top_k or top_k < 1):
        raise ValidationError("top_k must be a positive integer")
    if qc_threshold is not None and not (qc_threshold > 0 and math.isfinite(qc_threshold)):
        raise ValidationError("qc_threshold must be a positive real")
    if stagnation_window is not None and (
        int(stagnation_window) != stagnation_window or stagnation_window < 1
    ):
        raise ValidationError("stagnation_window must be a positive integer")


@dataclass
class ProgressTracker:
    """Per-run bookkeeping: events, trace rows and termination decisions.

    ``top_k``/``qc_threshold`` stop the run once ``top_k`` distinct keys
    (1 when only a threshold is given) have query cost <= ``qc_threshold``
    (unbounded when only ``top_k`` is given).
    """

    max_iterations: int
    top_k: int | None = None
    qc_threshold: float | None = None
    stagnation_window: int | None = None
    events: list = field(default_factory=list)
    trace: list = field(default_factory=list)
    _best_cost: dict = field(default_factory=dict)
    _hits: set = field(default_factory=set)
    _best: float = math.inf
    _since_improvement: int = 0
    iterations_to_topk: int | None = None

    @property
    def _goal(self):
        if self.top_k is None and self.qc_threshold is None:
            return None
        k = self.top_k if self.top_k is not None else 1
        qc = self.qc_threshold if self.qc_threshold is not None else math.inf
        return k, qc

    def observe(self, iteration, key, query_cost):
        prev = self._best_cost.get(key)
        if prev is None or query_cost < prev:
            self._best_cost[key] = query_cost
            self.events.append((iteration, key, query_cost))
            goal = self._goal
            if goal is not None and query_cost <= goal[1]:
                self._hits.add(key)

    def close_iteration(self, iteration, best_fitness, best_query_cost, evaluations):
        """Record the trace row; return a termination reason or None."""
        row = {
            "iteration": iteration,
            "best_fitness": best_fitness,
            "best_query_cost": best_query_cost,
            "evaluations": evaluations,
        }
        goal = self._goal
        if goal is not None:
            row["within_qc"] = len(self._hits)
        self.trace.append(row)

        if best_fitness < self._best:
            self._best = best_fitness
            self._since_improvement = 0
        elif iteration > 0:
            self._since_improvement += 1

        if goal is not None and len(self._hits) >= goal[0]:
            if self.iterations_to_topk is None:
                self.iterations_to_topk = iteration
            return "top_k" if self.top_k is not None else "qc_threshold"
        if self.stagnation_window is not None and self._since_improvement >= self.stagnation_window:
            return "stagnation"
        if iteration >= self.max_iterations:
            return "max_iterations"
        return None
