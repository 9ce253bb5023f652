"""Teaching-learning-based optimization over query plans.

Two search spaces are supported:

``faithful``
    Learners are cost vectors ``(qac, qlc, lpc)`` of a fixed set of plans.
    The teacher phase is accepted unconditionally; the run re-ranks the
    initial plans by the evolved vectors.
``discrete``
    Learners are plans. Updated positions are repaired to the nearest
    valid site assignment and re-costed; both phases accept only strict
    improvements. With ``duplicates="resample"`` (default) a learner that
    duplicates an earlier one after the learner phase is replaced by a
    fresh uniform plan.

Fitness is the sphere function ``qac**2 + qlc**2 + lpc**2`` (minimized).
Randomness comes from ``numpy.random.default_rng(seed)`` (PCG64).
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from .costmodel import Evaluator, sphere_fitness
from .errors import PlanforgeError, ValidationError
from .report import OptimizationReport, ProgressTracker, RankedPlan, check_termination
from .sampling import PlanSampler, replace_duplicates

__all__ = [
    "TlboConfig",
    "Learner",
    "FaithfulSpace",
    "DiscreteSpace",
    "init_population",
    "select_teacher",
    "mean_result",
    "teaching_factor",
    "teacher_phase",
    "learner_candidate",
    "learner_phase",
    "repair",
    "run",
]

MODES = ("faithful", "discrete")
DUPLICATE_POLICIES = ("resample", "keep")


@dataclass(frozen=True)
class TlboConfig:
    population_size: int = 20
    max_iterations: int = 100
    mode: str = "discrete"
    seed: int = 0
    top_k: int | None = None
    qc_threshold: float | None = None
    stagnation_window: int | None = None
    duplicates: str = "resample"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {MODES}, got {self.mode!r}")
        if int(self.population_size) != self.population_size or self.population_size < 2:
            raise ValidationError("population_size must be an integer >= 2")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")
        if self.duplicates not in DUPLICATE_POLICIES:
            raise ValidationError(f"duplicates must be one of {DUPLICATE_POLICIES}")
        check_termination(
            self.max_iterations, self.top_k, self.qc_threshold, self.stagnation_window
        )

    def to_dict(self):
        return asdict(self)


@dataclass
class Learner:
    """One member of the class.

    ``position`` is the cost vector (faithful) or the site vector
    (discrete). ``plan`` is the plan the learner stands for: its origin in
    faithful mode, its current repaired plan in discrete mode.
    """

    position: np.ndarray
    fitness: float
    plan: tuple | None = None
    costs: object = None


class FaithfulSpace:
    """Positions are cost vectors; fitness is the sphere function on them."""

    accept_teacher_unconditionally = True

    def __init__(self):
        self.evaluations = 0

    def evaluate(self, position, like=None):
        self.evaluations += 1
        position = np.asarray(position, dtype=float)
        return Learner(
            position,
            sphere_fitness(position),
            plan=None if like is None else like.plan,
            costs=None if like is None else like.costs,
        )

    def evaluate_many(self, positions, likes):
        return [self.evaluate(p, l) for p, l in zip(positions, likes)]

    def key(self, index, learner):
        return index


class DiscreteSpace:
    """Positions are site vectors repaired onto the valid plan space."""

    accept_teacher_unconditionally = False

    def __init__(self, evaluator):
        self.evaluator = evaluator
        self.evaluations = 0
        tables = [_nearest_table(h) for h in evaluator.holding]
        self.lo = np.array([lo for lo, _ in tables], dtype=np.int64)
        self.hi = np.array([lo + len(t) - 1 for lo, t in tables], dtype=np.int64)
        self.table = np.zeros((len(tables), int((self.hi - self.lo).max()) + 1), dtype=np.int64)
        for j, (_, t) in enumerate(tables):
            self.table[j, : len(t)] = t
        self._cols = np.arange(len(tables))
        self._scalar = [(lo, len(t) - 1, t) for lo, t in tables]

    def repair_many(self, positions):
        """Vectorized :func:`repair` over the rows of ``positions``."""
        x = np.asarray(positions, dtype=float)
        if not np.isfinite(x).all():
            raise PlanforgeError("position has non-finite components")
        v = np.floor(x + 0.5)
        v = np.clip(v, self.lo, self.hi).astype(np.int64)
        return self.table[self._cols, v - self.lo]

    def repair(self, position):
        out = []
        for x, (lo, span, t) in zip(np.asarray(position, dtype=float).tolist(), self._scalar):
            v = _round_half_up(x) - lo
            out.append(t[0 if v < 0 else span if v > span else v])
        return tuple(out)

    def _learner(self, plan):
        self.evaluations += 1
        costs = self.evaluator.costs(plan)
        return Learner(np.array(plan, dtype=float), sphere_fitness(costs), plan, costs)

    def evaluate(self, position, like=None):
        return self._learner(self.repair(position))

    def evaluate_many(self, positions, likes=None):
        return [self._learner(tuple(row)) for row in self.repair_many(positions).tolist()]

    def key(self, index, learner):
        return learner.plan


def _round_half_up(x):
    if not math.isfinite(x):
        raise PlanforgeError(f"position component {x} is not finite")
    return int(math.floor(x + 0.5))


def _nearest_table(valid):
    """For each integer in [min(valid), max(valid)], the nearest valid id."""
    valid = sorted(int(s) for s in valid)
    lo, hi = valid[0], valid[-1]
    table = []
    k = 0
    for v in range(lo, hi + 1):
        while valid[k] < v:
            k += 1
        if valid[k] == v or k == 0:
            table.append(valid[k])
        else:
            below, above = valid[k - 1], valid[k]
            table.append(below if v - below <= above - v else above)
    return lo, table


def repair(position, rsm, query):
    """Map a real vector to the nearest valid plan.

    Each component is rounded half-up to an integer, then replaced by the
    site holding that position's relation with the smallest absolute id
    distance (ties to the lower id).
    """
    if len(position) != query.n_relations:
        raise ValidationError(
            f"position has {len(position)} components, query has {query.n_relations}"
        )
    plan = []
    for x, rel in zip(position, query.relations):
        v = _round_half_up(float(x))
        plan.append(min(rsm.sites_holding(rel), key=lambda s: (abs(s - v), s)))
    return tuple(plan)


def init_population(rsm, catalog, query, config, rng=None, evaluator=None):
    """Sample ``population_size`` valid plans and cost them.

    Each position draws uniformly from the sites holding its relation.
    Repeated plans are redrawn a few times; a space smaller than the
    population necessarily repeats.
    """
    evaluator = evaluator or Evaluator(rsm, catalog, query)
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    sampler = PlanSampler(evaluator.holding)
    plans = [tuple(r) for r in sampler.draw(rng, config.population_size).tolist()]
    plans = replace_duplicates(plans, set(), sampler, rng)
    learners = []
    for plan in plans:
        costs = evaluator.costs(plan)
        if config.mode == "faithful":
            position = costs.as_array()
        else:
            position = np.array(plan, dtype=float)
        learners.append(Learner(position, sphere_fitness(costs), plan, costs))
    return learners


def select_teacher(population):
    """Learner with the lowest fitness; ties go to the earliest."""
    if not population:
        raise PlanforgeError("cannot select a teacher from an empty population")
    best = 0
    for i, learner in enumerate(population):
        if learner.fitness < population[best].fitness:
            best = i
    return population[best]


def mean_result(population):
    if not population:
        raise PlanforgeError("empty population")
    return np.mean([l.position for l in population], axis=0)


def teaching_factor(rng):
    """``round(1 + u)`` for ``u ~ U[0, 1)``: 1 below 0.5, else 2."""
    u = rng.random()
    return 1 if u < 0.5 else 2


def teacher_phase(population, rng, space=None, difference=None):
    """Shift every learner by ``r * (teacher - T_F * mean)``.

    One ``r`` per dimension is drawn per phase and shared by all learners.
    Passing ``difference`` skips the draw and applies that shift directly.
    """
    space = space or FaithfulSpace()
    if difference is None:
        teacher = select_teacher(population)
        mean = mean_result(population)
        tf = teaching_factor(rng)
        r = rng.random(len(mean))
        difference = r * (teacher.position - tf * mean)
    positions = np.array([l.position for l in population]) + np.asarray(difference, dtype=float)
    out = []
    for learner, cand in zip(population, space.evaluate_many(positions, population)):
        if space.accept_teacher_unconditionally or cand.fitness < learner.fitness:
            out.append(cand)
        else:
            out.append(learner)
    return out


def learner_candidate(x_i, f_i, x_j, f_j, r):
    """Move ``x_i`` toward the better of the pair and away from the worse."""
    x_i = np.asarray(x_i, dtype=float)
    x_j = np.asarray(x_j, dtype=float)
    if f_i < f_j:
        return x_i + r * (x_i - x_j)
    return x_i + r * (x_j - x_i)


def learner_phase(population, rng, space=None):
    """Pairwise learning, one learner at a time, greedy acceptance.

    Learner ``i`` gets a uniform partner ``j != i`` and its own
    per-dimension ``r``; later learners see earlier updates.
    """
    space = space or FaithfulSpace()
    n = len(population)
    if n < 2:
        raise PlanforgeError("learner phase needs at least two learners")
    partners = rng.integers(n - 1, size=n)
    partners = partners + (partners >= np.arange(n))
    r = rng.random((n, len(population[0].position)))
    pop = list(population)
    for i in range(n):
        xi, xj = pop[i], pop[int(partners[i])]
        cand = space.evaluate(
            learner_candidate(xi.position, xi.fitness, xj.position, xj.fitness, r[i]), xi
        )
        if cand.fitness < xi.fitness:
            pop[i] = cand
    return pop


def _replace_duplicate_learners(population, rng, space, sampler):
    taken, out = set(), []
    for learner in population:
        if learner.plan in taken:
            fresh = replace_duplicates([learner.plan], taken, sampler, rng)[0]
            learner = space._learner(fresh)
        else:
            taken.add(learner.plan)
        out.append(learner)
    return out


def _ranked_entry(learner, faithful):
    if faithful:
        qac, qlc, lpc = (float(v) for v in learner.position)
    else:
        qac, qlc, lpc = learner.costs.as_tuple()
    return RankedPlan(
        plan=learner.plan,
        qac=qac,
        qlc=qlc,
        lpc=lpc,
        control_site=learner.costs.control_site,
        fitness=learner.fitness,
        query_cost=learner.fitness,
    )


def run(rsm, catalog, query, config, evaluator=None):
    """Full TLBO run; returns an :class:`OptimizationReport`.

    Iteration 0 is the initial population. Each later iteration is one
    teacher phase followed by one learner phase.
    """
    if not isinstance(config, TlboConfig):
        config = TlboConfig(**config)
    evaluator = evaluator or Evaluator(rsm, catalog, query)
    rng = np.random.default_rng(config.seed)
    faithful = config.mode == "faithful"
    space = FaithfulSpace() if faithful else DiscreteSpace(evaluator)
    sampler = PlanSampler(evaluator.holding)
    dedupe = not faithful and config.duplicates == "resample"
    tracker = ProgressTracker(
        config.max_iterations, config.top_k, config.qc_threshold, config.stagnation_window
    )

    population = init_population(rsm, catalog, query, config, rng, evaluator)
    initial_evals = len(population)
    archive = {}

    def record(iteration):
        for i, learner in enumerate(population):
            key = space.key(i, learner)
            tracker.observe(iteration, key, learner.fitness)
            if faithful or key not in archive:
                archive[key] = learner
        best = select_teacher(population)
        evals = initial_evals + space.evaluations
        return tracker.close_iteration(iteration, best.fitness, best.fitness, evals)

    iteration = 0
    reason = record(iteration)
    while reason is None:
        iteration += 1
        population = teacher_phase(population, rng, space)
        population = learner_phase(population, rng, space)
        if dedupe:
            population = _replace_duplicate_learners(population, rng, space, sampler)
        reason = record(iteration)

    if faithful:
        order = sorted(range(len(population)), key=lambda i: (archive[i].fitness, i))
        ranked = [_ranked_entry(archive[i], True) for i in order]
    else:
        pool = sorted(archive.values(), key=lambda l: (l.fitness, l.plan))
        keep = max(config.population_size, config.top_k or 0)
        ranked = [_ranked_entry(l, False) for l in pool[:keep]]

    return OptimizationReport(
        algorithm="tlbo",
        mode=config.mode,
        config=config.to_dict(),
        ranked=ranked,
        best=ranked[0],
        trace=tracker.trace,
        events=tracker.events,
        iterations=iteration,
        evaluations=initial_evals + space.evaluations,
        termination_reason=reason,
        iterations_to_topk=tracker.iterations_to_topk,
    )
