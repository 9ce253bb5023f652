"""Replica-aware query plan selection for distributed databases.

A query plan assigns each relation of a join query to one of the sites
holding a replica of it. Plans are scored on three normalized costs
(affinity, localization and local processing) and searched with
teaching-learning-based optimization, two genetic-algorithm baselines or
exhaustive enumeration.
"""

from .catalog import (
    Catalog,
    RelationSiteMatrix,
    RelationStats,
    load_catalog,
    load_rsm,
    render_catalog,
    render_rsm,
    sites_holding,
    uniform_catalog,
)
from .costmodel import (
    CostVector,
    Evaluator,
    QueryPlan,
    cost_vector,
    lpc,
    qac,
    qlc,
    sphere_fitness,
    weighted_fitness,
)
from .errors import (
    InvalidPlanError,
    ParseError,
    PlanforgeError,
    SaturationError,
    SemanticError,
    UnknownRelationError,
    ValidationError,
)
from .ga import GaConfig, ga_aggregation, vega
from .generate import generate_instance, write_instance
from .oracle import count_plans, exact_topk
from .query import JoinPredicate, Query, parse_query, render_query
from .report import OptimizationReport, RankedPlan
from .runner import make_config, optimize
from .samples import sample_instance
from .tlbo import TlboConfig

__version__ = "0.1.0"
