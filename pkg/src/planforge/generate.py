"""Random instances for scaling experiments."""

from pathlib import Path

import numpy as np

from .catalog import Catalog, RelationSiteMatrix, RelationStats, render_catalog, render_rsm
from .errors import ValidationError
from .query import JoinPredicate, Query, render_query

__all__ = ["generate_instance", "write_instance", "RSM_FILE", "CATALOG_FILE", "QUERY_FILE"]

RSM_FILE = "rsm.csv"
CATALOG_FILE = "catalog.yaml"
QUERY_FILE = "query.sql"


def generate_instance(n_sites, n_relations, replication_degree, seed):
    """Random (rsm, catalog, query) triple.

    Each relation is replicated on ``replication_degree`` distinct sites
    drawn uniformly. Tuple counts are log-uniform in [1e2, 1e5] and local
    selectivities uniform in [0.1, 0.9]. The query chain-joins all
    relations; a join's selectivity is ``1 / max(|Ri|, |Rj|)``, the usual
    key/foreign-key estimate.
    """
    if n_sites < 1 or n_relations < 1:
        raise ValidationError("n_sites and n_relations must be >= 1")
    if not 1 <= replication_degree <= n_sites:
        raise ValidationError(
            f"replication degree {replication_degree} impossible with {n_sites} sites"
        )
    rng = np.random.default_rng(seed)
    relations = tuple(f"R{i + 1}" for i in range(n_relations))
    cells = np.zeros((n_sites, n_relations), dtype=bool)
    for j in range(n_relations):
        cells[rng.choice(n_sites, size=replication_degree, replace=False), j] = True
    rsm = RelationSiteMatrix(tuple(range(1, n_sites + 1)), relations, cells)

    counts = np.rint(10.0 ** rng.uniform(2.0, 5.0, size=n_relations)).astype(int)
    sels = rng.uniform(0.1, 0.9, size=n_relations)
    stats = {r: RelationStats(int(c), float(s)) for r, c, s in zip(relations, counts, sels)}
    preds, joins = [], {}
    for i in range(n_relations - 1):
        a, b = relations[i], relations[i + 1]
        preds.append(JoinPredicate((a, f"k{i + 1}"), (b, f"k{i + 1}")))
        joins[frozenset((a, b))] = 1.0 / max(int(counts[i]), int(counts[i + 1]))
    catalog = Catalog(stats, joins, 0.01)

    projection = (f"{relations[0]}.k1",) if n_relations > 1 else ("*",)
    query = Query(projection, relations, tuple(preds))
    return rsm, catalog, query


def write_instance(directory, rsm, catalog, query):
    """Write the three instance files into ``directory``; returns their paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = (directory / RSM_FILE, directory / CATALOG_FILE, directory / QUERY_FILE)
    paths[0].write_text(render_rsm(rsm), encoding="utf-8")
    paths[1].write_text(render_catalog(catalog), encoding="utf-8")
    paths[2].write_text(render_query(query) + "\n", encoding="utf-8")
    return paths
