"""Bundled example instance: the 16-site, 8-relation allocation with its
eight-way join query and a uniform catalog, plus a worked population of
cost vectors."""

import io
from importlib import resources

import numpy as np

from .catalog import load_catalog, load_rsm
from .query import parse_query

__all__ = ["SAMPLE_FILES", "sample_text", "sample_instance", "worked_population"]

SAMPLE_FILES = {
    "rsm": "sample_rsm.csv",
    "catalog": "uniform_catalog.yaml",
    "query": "sample_query.sql",
    "population": "worked_population.csv",
}


def sample_text(kind):
    return resources.files("planforge").joinpath("data").joinpath(SAMPLE_FILES[kind]).read_text(encoding="utf-8")


def sample_instance():
    """``(rsm, catalog, query)`` for the bundled example."""
    rsm = load_rsm(sample_text("rsm"))
    catalog = load_catalog(sample_text("catalog"), rsm)
    return rsm, catalog, parse_query(sample_text("query"))


def worked_population():
    """Reference 4-decimal costs of a 20-learner class and its state after
    one teacher phase, as two ``(20, 4)`` arrays of qac, qlc, lpc, fitness."""
    rows = np.loadtxt(io.StringIO(sample_text("population")), delimiter=",", skiprows=1)
    return rows[:, 1:5], rows[:, 5:9]
