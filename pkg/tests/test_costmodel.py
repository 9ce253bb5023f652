import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planforge.catalog import Catalog, RelationSiteMatrix, RelationStats, uniform_catalog
from planforge.costmodel import (
    CostVector,
    Evaluator,
    QueryPlan,
    check_weights,
    clpc,
    cost_vector,
    lpc,
    qac,
    qlc,
    rpc,
    sphere_fitness,
    weighted_fitness,
)
from planforge.errors import DegenerateCatalogError, InvalidPlanError, SemanticError, ValidationError
from planforge.generate import generate_instance
from planforge.oracle import enumerate_plans
from planforge.query import JoinPredicate, Query


def test_qac_extremes():
    assert qac([3, 3, 3, 3]) == 0.0
    # all distinct: n * (1/n)(1 - 1/n) = 1 - 1/n
    assert qac([1, 2, 3, 4]) == pytest.approx(0.75)
    assert qac([7]) == 0.0


def test_qac_accepts_query_plan():
    assert qac(QueryPlan((1, 1, 2, 2))) == qac((1, 1, 2, 2)) == 0.5


def test_qlc_sample_plan_uniform_sizes(sample):
    _, catalog, query = sample
    # S2 serves three positions
    assert qlc((1, 1, 2, 2, 2, 3, 5, 3), catalog, query) == (0.625, 2)


def test_qlc_single_site():
    catalog = uniform_catalog(("R1", "R2"))
    query = Query(("*",), ("R1", "R2"))
    assert qlc((4, 4), catalog, query) == (0.0, 4)


def test_rpc_examples(sample):
    _, catalog, query = sample
    assert rpc("R3", catalog, query) == 0.0625
    single = Query(("*",), ("R1",))
    assert rpc("R1", Catalog({"R1": RelationStats(40, 1.0)}), single) == 1.0
    assert rpc("R1", Catalog({"R1": RelationStats(40, 0.0)}), single) == 0.0


def test_lpc_degenerate_single_relation():
    catalog = Catalog({"R1": RelationStats(10, 0.7)})
    assert lpc((1,), catalog, Query(("*",), ("R1",))) == 0.0


def test_clpc_join_outside_query():
    catalog = uniform_catalog(("R1", "R2", "R3"))
    q = Query.__new__(Query)
    object.__setattr__(q, "projection", ("*",))
    object.__setattr__(q, "relations", ("R1", "R2"))
    object.__setattr__(q, "join_predicates", (JoinPredicate(("R1", "a"), ("R3", "b")),))
    with pytest.raises(SemanticError):
        clpc(catalog, q)


def test_zero_total_tuples():
    catalog = Catalog({"R1": RelationStats(0, 0.5)})
    with pytest.raises(DegenerateCatalogError):
        qlc((1,), catalog, Query(("*",), ("R1",)))


def test_invalid_plan_names_pair(sample):
    rsm, catalog, query = sample
    with pytest.raises(InvalidPlanError) as exc:
        cost_vector((4, 1, 1, 1, 1, 3, 4, 3), rsm, catalog, query)
    assert (exc.value.relation, exc.value.site) == ("R1", 4)


def test_trivial_cost_vector():
    rsm = RelationSiteMatrix((1,), ("R1",), np.ones((1, 1), dtype=bool))
    c = cost_vector((1,), rsm, Catalog({"R1": RelationStats(5, 0.5)}), Query(("*",), ("R1",)))
    assert c.as_tuple() == (0.0, 0.0, 0.0)
    assert sum(c.as_tuple()) == 0.0 and c.control_site == 1


def test_fitness_examples():
    assert sphere_fitness((0.7188, 0.5354, 0.2667)) == pytest.approx(0.8744, abs=1e-3)
    assert sphere_fitness((0.4063, 0.0867, 0.2100)) == pytest.approx(0.2167, abs=1e-3)
    assert sphere_fitness((0, 0, 0)) == 0
    assert weighted_fitness((0.7188, 0.5354, 0.2667)) == pytest.approx(0.49146, abs=1e-5)
    assert weighted_fitness((0.3, 0.9, 0.1), (1, 0, 0)) == 0.3
    assert sphere_fitness(CostVector(0.1, 0.2, 0.3, 1)) == sphere_fitness((0.1, 0.2, 0.3))


@pytest.mark.parametrize("w", [(0.2, 0.5, 0.9), (0.5, 0.5), (-0.1, 0.6, 0.5), (math.nan, 0.5, 0.5)])
def test_bad_weights(w):
    with pytest.raises(ValidationError):
        check_weights(w)


def test_bad_weights_message():
    with pytest.raises(ValidationError, match="weights must sum to 1"):
        weighted_fitness((0, 0, 0), (0.2, 0.5, 0.9))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 7), st.integers(1, 5), st.integers(1, 7), st.integers(0, 10**6))
def test_batch_matches_scalar_bitwise(ns, nr, d, seed):
    rsm, catalog, query = generate_instance(ns, nr, min(d, ns), seed)
    ev = Evaluator(rsm, catalog, query)
    plans = list(enumerate_plans(rsm, query))[:500]
    q_ac, q_lc, l_pc, control = ev.evaluate_batch(np.array(plans))
    for i, plan in enumerate(plans):
        c = cost_vector(plan, rsm, catalog, query)
        assert (q_ac[i], q_lc[i], l_pc[i], control[i]) == (c.qac, c.qlc, c.lpc, c.control_site)


def test_evaluator_caches(sample):
    rsm, catalog, query = sample
    ev = Evaluator(rsm, catalog, query)
    plan = (1, 1, 1, 1, 1, 3, 5, 3)
    assert ev.costs(plan) is ev.costs(list(plan))
    assert ev.is_valid(plan) and not ev.is_valid((4,) + plan[1:])


def test_costs_are_bounded():
    rsm, catalog, query = generate_instance(6, 4, 3, 5)
    ev = Evaluator(rsm, catalog, query)
    q_ac, q_lc, l_pc, _ = ev.evaluate_batch(np.array(list(enumerate_plans(rsm, query))))
    assert (q_ac >= 0).all() and (q_ac <= 1 - 1 / 4 + 1e-12).all()
    assert (q_lc >= 0).all() and (q_lc <= 1).all()
    assert (l_pc >= 0).all()
