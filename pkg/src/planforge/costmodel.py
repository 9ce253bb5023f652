"""Plan costs: query affinity (QAC), localization (QLC) and local processing (LPC).

A plan is a site-assignment vector: ``plan[i]`` is the site serving
``query.relations[i]``. Every function here is pure.

``Evaluator`` bundles an instance, memoizes per-plan cost vectors and
offers a vectorized batch path. The scalar and batch paths accumulate
in the same order so they agree bit for bit.
"""

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateCatalogError,
    InvalidPlanError,
    SemanticError,
    ValidationError,
)

__all__ = [
    "QueryPlan",
    "CostVector",
    "qac",
    "qlc",
    "qlc_candidates",
    "rpc",
    "lpc",
    "clpc",
    "cost_vector",
    "validate_plan",
    "sphere_fitness",
    "weighted_fitness",
    "check_weights",
    "Evaluator",
    "DEFAULT_WEIGHTS",
]

DEFAULT_WEIGHTS = (0.2, 0.5, 0.3)


@dataclass(frozen=True)
class QueryPlan:
    assignment: tuple

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(int(s) for s in self.assignment))

    def __len__(self):
        return len(self.assignment)

    def __iter__(self):
        return iter(self.assignment)

    @property
    def distinct_sites(self):
        """Sites used by the plan, ascending."""
        return tuple(sorted(set(self.assignment)))

    @property
    def occupancy(self):
        """Site id -> number of plan positions served by that site."""
        return dict(sorted(Counter(self.assignment).items()))


@dataclass(frozen=True)
class CostVector:
    qac: float
    qlc: float
    lpc: float
    control_site: int

    def as_tuple(self):
        return (self.qac, self.qlc, self.lpc)

    def as_array(self):
        return np.array(self.as_tuple())


def _assignment(plan):
    if isinstance(plan, QueryPlan):
        return plan.assignment
    return tuple(int(s) for s in plan)


def _total_size(catalog, query):
    total = sum(catalog.tuple_count(r) for r in query.relations)
    if total <= 0:
        raise DegenerateCatalogError(
            "total tuple count over the query's relations is zero; costs are undefined"
        )
    return total


def qac(plan):
    """Heterogeneity of the sites a plan touches.

    Sum over distinct sites of ``(K/N)(1 - K/N)`` with ``K`` the number of
    positions served by the site and ``N`` the plan length.
    """
    a = _assignment(plan)
    if not a:
        raise ValidationError("plan is empty")
    n = len(a)
    counts = Counter(a)
    total = 0.0
    for site in sorted(counts):
        p = counts[site] / n
        total += p * (1.0 - p)
    return total


def qlc_candidates(plan, catalog, query):
    """Localization cost of every candidate control site of ``plan``.

    Returns ``{site: cost}`` where cost is the fraction of the query's tuples
    stored away from ``site``.
    """
    a = _assignment(plan)
    sizes = [catalog.tuple_count(r) for r in query.relations]
    total = _total_size(catalog, query)
    out = {}
    for site in sorted(set(a)):
        shipped = sum(size for size, s in zip(sizes, a) if s != site)
        out[site] = shipped / total
    return out


def qlc(plan, catalog, query):
    """Minimum localization cost and the control site achieving it.

    Relations co-located with the control site ship nothing. Ties go to
    the lowest site id.
    """
    a = _assignment(plan)
    if len(a) != query.n_relations:
        raise ValidationError(f"plan has {len(a)} positions, query has {query.n_relations}")
    sizes = [catalog.tuple_count(r) for r in query.relations]
    total = _total_size(catalog, query)
    best_site, best_shipped = None, None
    for site in sorted(set(a)):
        shipped = sum(size for size, s in zip(sizes, a) if s != site)
        if best_shipped is None or shipped < best_shipped:
            best_site, best_shipped = site, shipped
    return best_shipped / total, best_site


def rpc(relation, catalog, query):
    """Processing cost of one relation: surviving tuples over all query tuples."""
    if relation not in query.relations:
        raise SemanticError(f"{relation} is not part of the query")
    st = catalog.stats(relation)
    return (st.tuple_count * st.selectivity) / _total_size(catalog, query)


def clpc(catalog, query):
    """Control-site join integration cost (0 for a join-free query).

    The join output is estimated as ``|Ri| * |Rj| * Sj``.
    """
    total = _total_size(catalog, query)
    best = 0.0
    for pred in query.join_predicates:
        ri, rj = pred.relations
        if ri not in query.relations or rj not in query.relations:
            raise SemanticError(f"join {ri}-{rj} references a relation outside the query")
        sj = catalog.join_sel(ri, rj)
        est = catalog.tuple_count(ri) * catalog.tuple_count(rj) * sj
        best = max(best, est * sj / total)
    return best


def lpc(plan, catalog, query, control_site=None):
    """Local processing cost.

    Sum over the plan's non-control sites of the largest relation
    processing cost at that site, plus the control-site join cost. When
    ``control_site`` is omitted it is taken from :func:`qlc`.
    """
    a = _assignment(plan)
    if control_site is None:
        _, control_site = qlc(a, catalog, query)
    costs = [rpc(r, catalog, query) for r in query.relations]
    per_site = {}
    for c, s in zip(costs, a):
        per_site[s] = max(per_site.get(s, 0.0), c)
    remote = 0.0
    for site in sorted(per_site):
        if site != control_site:
            remote += per_site[site]
    return remote + clpc(catalog, query)


def validate_plan(plan, rsm, query):
    """Raise :class:`InvalidPlanError` unless every position holds a replica."""
    a = _assignment(plan)
    if len(a) != query.n_relations:
        raise InvalidPlanError(
            f"plan has {len(a)} positions but the query has {query.n_relations} relations"
        )
    for rel, site in zip(query.relations, a):
        if site not in rsm.sites or not rsm.stores(site, rel):
            raise InvalidPlanError(
                f"site {site} holds no replica of {rel}", relation=rel, site=site
            )
    return a


def cost_vector(plan, rsm, catalog, query):
    """Validate ``plan`` and bundle its three costs with the control site."""
    a = validate_plan(plan, rsm, query)
    q, control = qlc(a, catalog, query)
    return CostVector(qac(a), q, lpc(a, catalog, query, control), control)


def sphere_fitness(c):
    """Sum of squared costs. Accepts a CostVector or any 3-sequence."""
    x, y, z = c.as_tuple() if isinstance(c, CostVector) else c
    return x * x + y * y + z * z


def check_weights(weights):
    w = tuple(float(v) for v in weights)
    if len(w) != 3:
        raise ValidationError("weights must have three components (qac, qlc, lpc)")
    if any(v < 0 or not math.isfinite(v) for v in w):
        raise ValidationError("weights must be nonnegative")
    if abs(sum(w) - 1.0) > 1e-9:
        raise ValidationError("weights must sum to 1")
    return w


def weighted_fitness(c, weights=DEFAULT_WEIGHTS):
    w1, w2, w3 = check_weights(weights)
    x, y, z = c.as_tuple() if isinstance(c, CostVector) else c
    return w1 * x + w2 * y + w3 * z


class Evaluator:
    """Cost evaluation for one (rsm, catalog, query) instance.

    ``costs`` memoizes by plan tuple; ``evaluate_batch`` scores a whole
    array of plans at once. The cache makes it worth sharing one evaluator
    across runs on the same instance.
    """

    def __init__(self, rsm, catalog, query):
        for rel in query.relations:
            if rel not in rsm.relations:
                raise SemanticError(f"query relation {rel} is absent from the allocation matrix")
        catalog.covers(query.relations)
        self.rsm = rsm
        self.catalog = catalog
        self.query = query
        self.holding = [np.array(rsm.sites_holding(r), dtype=np.int64) for r in query.relations]
        self._holding_sets = [frozenset(h.tolist()) for h in self.holding]
        self.sizes = [catalog.tuple_count(r) for r in query.relations]
        self.total = _total_size(catalog, query)
        self.rpc = np.array([rpc(r, catalog, query) for r in query.relations])
        self.clpc = clpc(catalog, query)
        self.site_ids = np.array(sorted(rsm.sites), dtype=np.int64)
        self._cache = {}

    @property
    def n_relations(self):
        return self.query.n_relations

    def is_valid(self, plan):
        return len(plan) == self.n_relations and all(
            s in h for s, h in zip(plan, self._holding_sets)
        )

    def costs(self, plan):
        """Memoized :func:`cost_vector` for a plan tuple."""
        key = tuple(plan)
        hit = self._cache.get(key)
        if hit is None:
            hit = cost_vector(key, self.rsm, self.catalog, self.query)
            self._cache[key] = hit
        return hit

    def evaluate_batch(self, plans):
        """Vectorized costs for a ``(B, N_r)`` array of valid plans.

        Returns ``(qac, qlc, lpc, control_site)`` arrays of length ``B``.
        Plans are not validated here.
        """
        plans = np.asarray(plans, dtype=np.int64)
        if plans.ndim != 2 or plans.shape[1] != self.n_relations:
            raise ValidationError(f"expected a (B, {self.n_relations}) array of plans")
        b, n = plans.shape
        cols = np.searchsorted(self.site_ids, plans)
        n_cols = len(self.site_ids)
        rows = np.arange(b)
        counts = np.zeros((b, n_cols), dtype=np.int64)
        weight = np.zeros((b, n_cols), dtype=np.int64)
        peak = np.zeros((b, n_cols))
        for j in range(n):
            c = cols[:, j]
            counts[rows, c] += 1
            weight[rows, c] += self.sizes[j]
            peak[rows, c] = np.maximum(peak[rows, c], self.rpc[j])

        q_ac = np.zeros(b)
        for c in range(n_cols):
            p = counts[:, c] / n
            q_ac = q_ac + p * (1.0 - p)

        masked = np.where(counts > 0, weight, -1)
        control_col = np.argmax(masked, axis=1)
        q_lc = (self.total - weight[rows, control_col]) / self.total

        peak[rows, control_col] = 0.0
        remote = np.zeros(b)
        for c in range(n_cols):
            remote = remote + peak[:, c]
        l_pc = remote + self.clpc
        return q_ac, q_lc, l_pc, self.site_ids[control_col]
