"""Genetic-algorithm baselines: weighted-sum aggregation GA and VEGA.

Chromosomes are site-assignment vectors. Mutation redraws a gene from the
sites holding that position's relation and single-point crossover swaps
whole positions, so every chromosome is a valid plan by construction.

Each generation's random draws are taken in bulk, in a fixed order, from
``numpy.random.default_rng(seed)``.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from .costmodel import DEFAULT_WEIGHTS, Evaluator, check_weights, sphere_fitness
from .errors import ValidationError
from .report import OptimizationReport, ProgressTracker, RankedPlan, check_termination
from .sampling import PlanSampler, replace_duplicates

__all__ = [
    "GaConfig",
    "tournament",
    "single_point_crossover",
    "mutate",
    "subgroup_sizes",
    "ga_aggregation",
    "vega",
]

OBJECTIVES = ("qac", "qlc", "lpc")
DUPLICATE_POLICIES = ("resample", "keep")


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 20
    max_iterations: int = 100
    crossover_probability: float = 0.8
    mutation_probability: float = 0.2
    weights: tuple = DEFAULT_WEIGHTS
    seed: int = 0
    top_k: int | None = None
    qc_threshold: float | None = None
    stagnation_window: int | None = None
    duplicates: str = "resample"

    def __post_init__(self):
        if int(self.population_size) != self.population_size or self.population_size < 2:
            raise ValidationError("population_size must be an integer >= 2")
        for name in ("crossover_probability", "mutation_probability"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1], got {p}")
        object.__setattr__(self, "weights", check_weights(self.weights))
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")
        if self.duplicates not in DUPLICATE_POLICIES:
            raise ValidationError(f"duplicates must be one of {DUPLICATE_POLICIES}")
        check_termination(
            self.max_iterations, self.top_k, self.qc_threshold, self.stagnation_window
        )

    def to_dict(self):
        d = asdict(self)
        d["weights"] = list(self.weights)
        return d


def tournament(fitness, rng):
    """Binary tournament (minimization); the lower index wins ties."""
    a, b = (int(v) for v in rng.integers(len(fitness), size=2))
    return _winner(np.asarray(fitness), np.array([a]), np.array([b]))[0]


def _winner(fitness, a, b):
    fa, fb = fitness[a], fitness[b]
    take_b = (fb < fa) | ((fb == fa) & (b < a))
    return np.where(take_b, b, a)


def _tournaments(fitness, rng, count):
    pairs = rng.integers(len(fitness), size=(count, 2))
    return _winner(np.asarray(fitness), pairs[:, 0], pairs[:, 1])


def single_point_crossover(a, b, point):
    """Children ``a[:point] + b[point:]`` and ``b[:point] + a[point:]``."""
    a, b = tuple(a), tuple(b)
    return a[:point] + b[point:], b[:point] + a[point:]


def mutate(plan, holding, probability, rng):
    """Per gene, with ``probability``, redraw from that relation's sites."""
    out = list(plan)
    hits = rng.random(len(out)) < probability
    for j in np.flatnonzero(hits):
        h = holding[j]
        out[j] = int(h[rng.integers(len(h))])
    return tuple(out)


def subgroup_sizes(population_size, n_objectives=3):
    """Per-objective selection quotas; the remainder goes to the first objectives."""
    base, extra = divmod(population_size, n_objectives)
    return tuple(base + (1 if i < extra else 0) for i in range(n_objectives))


def _breed(parents_a, parents_b, config, holding, rng):
    """Single-point crossover then per-gene mutation of parent pairs.

    Row ``i`` of the inputs is one pair; returns first children then
    second children.
    """
    m, n = parents_a.shape
    coin = rng.random(m) < config.crossover_probability
    if n > 1:
        points = rng.integers(1, n, size=m)
        keep_a = (np.arange(n)[None, :] < points[:, None]) | ~coin[:, None]
    else:
        keep_a = np.ones((m, n), dtype=bool)
    c1 = np.where(keep_a, parents_a, parents_b)
    c2 = np.where(keep_a, parents_b, parents_a)
    children = np.concatenate([c1, c2])
    hits = rng.random(children.shape) < config.mutation_probability
    return np.where(hits, holding.draw(rng, len(children)), children)


def _as_plans(rows):
    return [tuple(r) for r in rows.tolist()]


class _Run:
    """State shared by both GA variants."""

    def __init__(self, name, rsm, catalog, query, config, native, evaluator=None):
        self.name = name
        self.config = config
        self.native = native
        self.evaluator = evaluator or Evaluator(rsm, catalog, query)
        self.evaluations = 0
        self.holding = PlanSampler(self.evaluator.holding)
        self.rng = np.random.default_rng(config.seed)
        self.tracker = ProgressTracker(
            config.max_iterations, config.top_k, config.qc_threshold, config.stagnation_window
        )
        self.archive = {}
        self.best_native = math.inf

    @property
    def dedupe(self):
        return self.config.duplicates == "resample"

    def initial(self):
        plans = _as_plans(self.holding.draw(self.rng, self.config.population_size))
        if self.dedupe:
            plans = replace_duplicates(plans, set(), self.holding, self.rng)
        return self.score(plans)

    def score(self, plans):
        self.evaluations += len(plans)
        out = []
        for plan in plans:
            costs = self.evaluator.costs(plan)
            out.append((plan, costs, self.native(costs), sphere_fitness(costs)))
        return out

    def record(self, iteration, scored):
        for plan, costs, native, qc in scored:
            self.tracker.observe(iteration, plan, qc)
            if plan not in self.archive:
                self.archive[plan] = RankedPlan(plan, *costs.as_tuple(), costs.control_site, native, qc)
        self.best_native = min(self.best_native, min(t[2] for t in scored))
        return self.tracker.close_iteration(
            iteration, self.best_native, min(t[3] for t in scored), self.evaluations
        )

    def report(self, iteration, reason):
        ranked = sorted(self.archive.values(), key=lambda p: (p.fitness, p.plan))
        keep = max(self.config.population_size, self.config.top_k or 0)
        return OptimizationReport(
            algorithm=self.name,
            mode="discrete",
            config=self.config.to_dict(),
            ranked=ranked[:keep],
            best=ranked[0],
            trace=self.tracker.trace,
            events=self.tracker.events,
            iterations=iteration,
            evaluations=self.evaluations,
            termination_reason=reason,
            iterations_to_topk=self.tracker.iterations_to_topk,
        )


def _config(config):
    return config if isinstance(config, GaConfig) else GaConfig(**config)


def ga_aggregation(rsm, catalog, query, config, evaluator=None):
    """Generational GA on the weighted sum of (qac, qlc, lpc).

    Binary tournament selection, single-point crossover with probability
    ``P_c``, per-gene mutation with probability ``P_m`` and an elite of one.
    """
    config = _config(config)
    w1, w2, w3 = config.weights
    # same arithmetic as weighted_fitness, without re-validating per call
    state = _Run(
        "agga", rsm, catalog, query, config,
        lambda c: w1 * c.qac + w2 * c.qlc + w3 * c.lpc,
        evaluator,
    )
    rng, size = state.rng, config.population_size
    n_pairs = math.ceil((size - 1) / 2)

    scored = state.initial()
    iteration = 0
    reason = state.record(iteration, scored)
    while reason is None:
        iteration += 1
        pop = np.array([t[0] for t in scored], dtype=np.int64)
        fit = np.array([t[2] for t in scored])
        elite = min(scored, key=lambda t: (t[2], t[0]))
        win = _tournaments(fit, rng, 2 * n_pairs)
        children = _breed(pop[win[:n_pairs]], pop[win[n_pairs:]], config, state.holding, rng)
        plans = _as_plans(children[: size - 1])
        if state.dedupe:
            plans = replace_duplicates(plans, {elite[0]}, state.holding, rng)
        scored = [elite] + state.score(plans)
        reason = state.record(iteration, scored)
    return state.report(iteration, reason)


def vega(rsm, catalog, query, config, evaluator=None):
    """Vector-evaluated GA.

    The mating pool is filled in three quotas (see :func:`subgroup_sizes`),
    each by binary tournament on one objective, then shuffled and bred as in
    :func:`ga_aggregation` without elitism. Plans are ranked by sphere
    fitness. ``weights`` is ignored.
    """
    config = _config(config)
    state = _Run("vega", rsm, catalog, query, config, sphere_fitness, evaluator)
    rng, size = state.rng, config.population_size
    quotas = subgroup_sizes(size)

    scored = state.initial()
    iteration = 0
    reason = state.record(iteration, scored)
    while reason is None:
        iteration += 1
        pop = np.array([t[0] for t in scored], dtype=np.int64)
        objectives = np.array([t[1].as_tuple() for t in scored])
        pool = np.concatenate(
            [_tournaments(objectives[:, k], rng, q) for k, q in enumerate(quotas)]
        )
        pool = pool[rng.permutation(len(pool))]
        if len(pool) % 2:
            pool = np.append(pool, pool[0])
        children = _breed(pop[pool[0::2]], pop[pool[1::2]], config, state.holding, rng)
        plans = _as_plans(children[:size])
        if state.dedupe:
            plans = replace_duplicates(plans, set(), state.holding, rng)
        scored = state.score(plans)
        reason = state.record(iteration, scored)
    return state.report(iteration, reason)
