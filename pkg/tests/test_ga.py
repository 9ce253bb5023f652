import numpy as np
import pytest

from planforge import ga
from planforge.errors import ValidationError
from planforge.generate import generate_instance


def test_tournament_lower_index_wins_ties():
    fit = np.array([0.5, 0.5, 0.1])
    assert ga._winner(fit, np.array([1, 0, 2]), np.array([0, 1, 0])).tolist() == [0, 0, 2]


def test_single_point_crossover():
    a, b = (1, 2, 3, 4), (5, 6, 7, 8)
    assert ga.single_point_crossover(a, b, 1) == ((1, 6, 7, 8), (5, 2, 3, 4))
    assert ga.single_point_crossover(a, b, 3) == ((1, 2, 3, 8), (5, 6, 7, 4))


def test_mutation_stays_valid():
    holding = [np.array([1, 3]), np.array([2]), np.array([4, 5, 6])]
    rng = np.random.default_rng(0)
    for _ in range(200):
        child = ga.mutate((1, 2, 4), holding, 0.7, rng)
        assert all(s in h for s, h in zip(child, holding))
    assert ga.mutate((1, 2, 4), holding, 0.0, rng) == (1, 2, 4)


def test_subgroup_sizes():
    assert ga.subgroup_sizes(20) == (7, 7, 6)
    assert ga.subgroup_sizes(21) == (7, 7, 7)
    assert sum(ga.subgroup_sizes(23)) == 23


def test_caption_defaults():
    c = ga.GaConfig()
    assert (c.crossover_probability, c.mutation_probability, c.weights) == (0.8, 0.2, (0.2, 0.5, 0.3))
    assert (c.population_size, c.max_iterations) == (20, 100)


@pytest.mark.parametrize(
    "kw",
    [dict(weights=(0.2, 0.5, 0.9)), dict(crossover_probability=1.2), dict(mutation_probability=-0.1),
     dict(population_size=1), dict(duplicates="x"), dict(stagnation_window=0)],
)
def test_config_validation(kw):
    with pytest.raises(ValidationError):
        ga.GaConfig(**kw)


@pytest.mark.parametrize("fn", [ga.ga_aggregation, ga.vega])
def test_runs_are_deterministic_and_valid(sample, fn):
    rsm, catalog, query = sample
    a = fn(rsm, catalog, query, ga.GaConfig(seed=3, max_iterations=20))
    b = fn(rsm, catalog, query, {"seed": 3, "max_iterations": 20})
    assert a.to_json() == b.to_json()
    for _, plan, _ in a.events:
        assert all(rsm.stores(s, r) for s, r in zip(plan, query.relations))
    assert len(a.ranked) == 20 and a.best == a.ranked[0]


def test_aggregation_elitism_monotone(sample):
    rsm, catalog, query = sample
    rep = ga.ga_aggregation(rsm, catalog, query, ga.GaConfig(seed=5))
    best = [row["best_fitness"] for row in rep.trace]
    assert all(b <= a for a, b in zip(best, best[1:]))
    assert rep.evaluations == 20 + 100 * 19


def test_aggregation_native_fitness_is_weighted(sample):
    rsm, catalog, query = sample
    rep = ga.ga_aggregation(rsm, catalog, query, ga.GaConfig(seed=1, max_iterations=5, weights=(1, 0, 0)))
    for p in rep.ranked:
        assert p.fitness == p.qac
        assert p.query_cost == pytest.approx(p.qac**2 + p.qlc**2 + p.lpc**2)


def test_vega_ranks_by_sphere(sample):
    rsm, catalog, query = sample
    rep = ga.vega(rsm, catalog, query, ga.GaConfig(seed=1, max_iterations=5))
    assert all(p.fitness == p.query_cost for p in rep.ranked)


def test_tiny_space_with_duplicates():
    # 2 plans only; duplicate removal must give up gracefully
    rsm, catalog, query = generate_instance(2, 1, 2, 0)
    rep = ga.ga_aggregation(rsm, catalog, query, ga.GaConfig(seed=0, max_iterations=3))
    assert len(rep.ranked) == 2


def test_single_position_breeding():
    rsm, catalog, query = generate_instance(4, 1, 3, 0)
    rep = ga.vega(rsm, catalog, query, ga.GaConfig(seed=0, max_iterations=3, population_size=5))
    assert len(rep.trace) == 4
