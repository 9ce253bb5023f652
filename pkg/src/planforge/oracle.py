"""Exhaustive enumeration of the valid plan space.

Ground truth for the metaheuristics. Plans are enumerated in lexicographic
order (each position's sites ascending) and scored in chunks with
``Evaluator.evaluate_batch``; the Top-K is kept with a total order of
``(fitness, plan)``, so the result does not depend on chunking.
"""

import csv
import heapq
import io
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .costmodel import DEFAULT_WEIGHTS, CostVector, Evaluator, check_weights
from .errors import ParseError, SaturationError, ValidationError

__all__ = [
    "DEFAULT_BOUND",
    "Saturated",
    "count_plans",
    "enumerate_plans",
    "exact_topk",
    "TOPK_HEADER",
    "write_topk_csv",
    "read_topk_csv",
]

DEFAULT_BOUND = 10**8
_CHUNK = 1 << 16


@dataclass(frozen=True)
class Saturated:
    """Returned by :func:`count_plans` when the space exceeds the bound."""

    count: int
    bound: int

    def __bool__(self):
        return False


def count_plans(rsm, query, bound=DEFAULT_BOUND):
    """Number of valid plans, or :class:`Saturated` above ``bound``."""
    n = math.prod(len(rsm.sites_holding(r)) for r in query.relations)
    return Saturated(n, bound) if n > bound else n


def enumerate_plans(rsm, query):
    """All valid plans, lexicographically."""
    return itertools.product(*(rsm.sites_holding(r) for r in query.relations))


def _fitness_arrays(q_ac, q_lc, l_pc, fitness, weights):
    if fitness == "sphere":
        return q_ac * q_ac + q_lc * q_lc + l_pc * l_pc
    w1, w2, w3 = weights
    return w1 * q_ac + w2 * q_lc + w3 * l_pc


def exact_topk(rsm, catalog, query, k, fitness="sphere", weights=DEFAULT_WEIGHTS, bound=DEFAULT_BOUND):
    """The ``k`` best valid plans as ``[(plan, fitness, CostVector), ...]``.

    ``fitness`` is ``"sphere"`` or ``"weighted"`` (with ``weights``). Ties
    are broken by the lexicographically smaller plan.
    """
    if fitness not in ("sphere", "weighted"):
        raise ValidationError(f"fitness must be 'sphere' or 'weighted', got {fitness!r}")
    if int(k) != k or k < 1:
        raise ValidationError("k must be a positive integer")
    weights = check_weights(weights)
    n = count_plans(rsm, query, bound)
    if isinstance(n, Saturated):
        raise SaturationError(n.count, bound)

    ev = Evaluator(rsm, catalog, query)
    best = []  # (fitness, plan, costs) candidates, pruned per chunk
    it = enumerate_plans(rsm, query)
    while True:
        chunk = list(itertools.islice(it, _CHUNK))
        if not chunk:
            break
        plans = np.array(chunk, dtype=np.int64)
        q_ac, q_lc, l_pc, control = ev.evaluate_batch(plans)
        f = _fitness_arrays(q_ac, q_lc, l_pc, fitness, weights)
        if len(f) > k:
            # keep everything tied with the k-th value so the tie-break stays exact
            kth = np.partition(f, k - 1)[k - 1]
            idx = np.flatnonzero(f <= kth)
        else:
            idx = np.arange(len(f))
        for i in idx:
            cv = CostVector(float(q_ac[i]), float(q_lc[i]), float(l_pc[i]), int(control[i]))
            best.append((float(f[i]), chunk[i], cv))
        best = heapq.nsmallest(k, best, key=lambda t: (t[0], t[1]))
    return [(tuple(int(s) for s in plan), fv, cv) for fv, plan, cv in best]


TOPK_HEADER = ("rank", "plan", "qac", "qlc", "lpc", "fitness", "control_site")


def write_topk_csv(entries):
    """CSV text for :func:`exact_topk` output; plans are written ``1-4-2``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TOPK_HEADER)
    for rank, (plan, f, cv) in enumerate(entries, start=1):
        w.writerow([
            rank, "-".join(str(s) for s in plan),
            repr(cv.qac), repr(cv.qlc), repr(cv.lpc), repr(f), cv.control_site,
        ])
    return buf.getvalue()


def read_topk_csv(text):
    """Inverse of :func:`write_topk_csv`: ``[(rank, plan, fitness, CostVector), ...]``."""
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != TOPK_HEADER:
        raise ParseError(f"unexpected oracle CSV header {reader.fieldnames}", line=1)
    out = []
    for line, row in enumerate(reader, start=2):
        try:
            plan = tuple(int(s) for s in row["plan"].split("-"))
            cv = CostVector(float(row["qac"]), float(row["qlc"]), float(row["lpc"]), int(row["control_site"]))
            out.append((int(row["rank"]), plan, float(row["fitness"]), cv))
        except (TypeError, ValueError):
            raise ParseError("malformed oracle CSV row", line=line) from None
    return out
