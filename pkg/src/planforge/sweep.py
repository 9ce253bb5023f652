"""Experiment sweeps over (algorithm, instance, K, QC, seed) cells.

A sweep spec is a YAML (or JSON) mapping::

    algorithms: [tlbo, vega, agga]
    k_values: [5, 10, 20]
    qc_thresholds: [0.2, 0.3, 0.4, 0.5, 0.6, 0.7]
    instances:              # [N_s, N_r] or [N_s, N_r, replication_degree]
      - [8, 4, 5]
    seeds: [0, 1, 2]
    replication_degree: 3   # default for two-element instances
    instance_seed: 1        # generator seed for every instance
    max_iterations: 100
    population_size: 20
    mode: discrete          # TLBO search space
    overrides:              # per-algorithm config fields
      agga: {crossover_probability: 0.8}

The trajectory of a seeded run does not depend on the stopping goal, so
each (algorithm, instance, seed) is run once for ``max_iterations`` and
every (K, QC) cell is read off its event log. ``best_fitness`` and
``evals`` are taken at the iteration the goal is reached (at the last
iteration when it never is).
"""

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import yaml

from .costmodel import Evaluator
from .errors import ParseError, ValidationError
from .generate import generate_instance
from .runner import ALGORITHMS, make_config, optimize

__all__ = [
    "SweepSpec",
    "load_sweep_spec",
    "run_sweep",
    "write_sweep_csv",
    "read_sweep_csv",
    "mean_iterations",
    "SWEEP_HEADER",
    "THREADS_ENV",
]

SWEEP_HEADER = (
    "algo", "mode", "N_s", "N_r", "K", "qc", "seed", "iterations_to_topk", "best_fitness", "evals",
)
THREADS_ENV = "PLANFORGE_THREADS"


def _nonempty(name, values):
    if not values:
        raise ValidationError(f"sweep spec: {name} must be a nonempty list")
    return tuple(values)


@dataclass(frozen=True)
class SweepSpec:
    algorithms: tuple
    k_values: tuple
    qc_thresholds: tuple
    instances: tuple
    seeds: tuple
    replication_degree: int = 3
    instance_seed: int = 1
    max_iterations: int = 100
    population_size: int = 20
    mode: str = "discrete"
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        algos = _nonempty("algorithms", self.algorithms)
        for a in algos:
            if a not in ALGORITHMS:
                raise ValidationError(f"sweep spec: unknown algorithm {a!r}")
        object.__setattr__(self, "algorithms", algos)
        ks = _nonempty("k_values", self.k_values)
        if any(int(k) != k or k < 1 for k in ks):
            raise ValidationError("sweep spec: k_values must be positive integers")
        object.__setattr__(self, "k_values", tuple(int(k) for k in ks))
        qcs = _nonempty("qc_thresholds", self.qc_thresholds)
        if any(not (float(q) > 0 and math.isfinite(float(q))) for q in qcs):
            raise ValidationError("sweep spec: qc_thresholds must be positive")
        object.__setattr__(self, "qc_thresholds", tuple(float(q) for q in qcs))
        insts = []
        for inst in _nonempty("instances", self.instances):
            inst = tuple(int(v) for v in inst)
            if len(inst) == 2:
                inst = inst + (min(self.replication_degree, inst[0]),)
            if len(inst) != 3:
                raise ValidationError("sweep spec: instances are [N_s, N_r] or [N_s, N_r, degree]")
            insts.append(inst)
        object.__setattr__(self, "instances", tuple(insts))
        object.__setattr__(self, "seeds", tuple(int(s) for s in _nonempty("seeds", self.seeds)))
        if not isinstance(self.overrides, dict):
            raise ValidationError("sweep spec: overrides must map algorithms to settings")
        for a, extra in self.overrides.items():
            if a not in ALGORITHMS:
                raise ValidationError(f"sweep spec: overrides for unknown algorithm {a!r}")
            if not isinstance(extra, dict):
                raise ValidationError(f"sweep spec: overrides for {a} must be a mapping")
        # fail early on bad settings rather than inside a worker
        for a in sorted(set(self.algorithms) | set(self.overrides)):
            self.config(a, self.seeds[0])

    def config(self, algo, seed):
        params = dict(
            population_size=self.population_size,
            max_iterations=self.max_iterations,
            mode=self.mode if algo == "tlbo" else None,
            seed=seed,
        )
        params.update(self.overrides.get(algo, {}))
        return make_config(algo, **params)

    @property
    def n_cells(self):
        return (
            len(self.algorithms) * len(self.instances) * len(self.k_values)
            * len(self.qc_thresholds) * len(self.seeds)
        )

    def to_dict(self):
        return asdict(self)


def load_sweep_spec(text):
    """Parse a YAML/JSON sweep spec; raises ParseError or ValidationError."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise ParseError(f"sweep spec is not valid YAML: {exc}", line=line) from None
    if not isinstance(doc, dict):
        raise ValidationError("sweep spec must be a mapping")
    known = {f for f in SweepSpec.__dataclass_fields__}
    unknown = sorted(set(doc) - known)
    if unknown:
        raise ValidationError(f"sweep spec: unknown field {unknown[0]!r}")
    missing = [f for f in ("algorithms", "k_values", "qc_thresholds", "instances", "seeds") if f not in doc]
    if missing:
        raise ValidationError(f"sweep spec: missing field {missing[0]!r}")
    for name in ("algorithms", "k_values", "qc_thresholds", "instances", "seeds"):
        if not isinstance(doc[name], list):
            raise ValidationError(f"sweep spec: {name} must be a list")
    try:
        return SweepSpec(**doc)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"sweep spec: {exc}") from None


def _run_group(args):
    spec, algo, inst, seeds = args
    n_sites, n_relations, degree = inst
    rsm, catalog, query = generate_instance(n_sites, n_relations, degree, spec.instance_seed)
    evaluator = Evaluator(rsm, catalog, query)
    rows = []
    for seed in seeds:
        config = spec.config(algo, seed)
        report = optimize(algo, rsm, catalog, query, config, evaluator)
        for k in spec.k_values:
            for qc in spec.qc_thresholds:
                hit = report.iterations_to_topk_for(k, qc)
                snap = report.snapshot(report.iterations if hit is None else hit)
                rows.append({
                    "algo": algo,
                    "mode": report.mode,
                    "N_s": n_sites,
                    "N_r": n_relations,
                    "K": k,
                    "qc": qc,
                    "seed": seed,
                    "iterations_to_topk": hit,
                    "best_fitness": snap["best_fitness"],
                    "evals": snap["evaluations"],
                })
    return rows


def _threads():
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if n < 0:
        raise ValidationError(f"{THREADS_ENV} must be >= 0")
    return n


def _row_key(row):
    return (row["algo"], row["mode"], row["N_s"], row["N_r"], row["K"], row["qc"], row["seed"])


def run_sweep(spec, threads=None):
    """All cell rows, sorted by cell key.

    ``threads`` (default from ``PLANFORGE_THREADS``, else the CPU count)
    caps worker processes; 0 or 1 runs in-process.
    """
    threads = _threads() if threads is None else threads
    groups = [(spec, a, inst, spec.seeds) for a in spec.algorithms for inst in spec.instances]
    if threads <= 1 or len(groups) == 1:
        results = map(_run_group, groups)
    else:
        with ProcessPoolExecutor(max_workers=min(threads, len(groups))) as pool:
            results = list(pool.map(_run_group, groups))
    rows = [row for group in results for row in group]
    return sorted(rows, key=_row_key)


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_sweep_csv(rows, out=None):
    """Render rows as CSV text (and write to the open file ``out`` if given)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for row in rows:
        w.writerow([_cell(row[c]) for c in SWEEP_HEADER])
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


_TYPES = {
    "N_s": int, "N_r": int, "K": int, "seed": int,
    "qc": float, "best_fitness": float, "evals": int, "iterations_to_topk": int,
}


def read_sweep_csv(text):
    """Inverse of :func:`write_sweep_csv`."""
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != SWEEP_HEADER:
        raise ParseError(f"unexpected sweep CSV header {reader.fieldnames}", line=1)
    rows = []
    for line, raw in enumerate(reader, start=2):
        row = {}
        for name, value in raw.items():
            conv = _TYPES.get(name)
            if conv is None:
                row[name] = value
            elif value == "" and name == "iterations_to_topk":
                row[name] = None
            else:
                try:
                    row[name] = conv(value)
                except (TypeError, ValueError):
                    raise ParseError(f"bad {name} value {value!r}", line=line) from None
        rows.append(row)
    return rows


def mean_iterations(rows, max_iterations):
    """Mean iterations_to_topk per (algo, N_s, N_r, K, qc) over seeds.

    Unreached cells count as ``max_iterations + 1``.
    """
    acc = {}
    for row in rows:
        key = (row["algo"], row["N_s"], row["N_r"], row["K"], row["qc"])
        hit = row["iterations_to_topk"]
        acc.setdefault(key, []).append(max_iterations + 1 if hit is None else hit)
    return {k: sum(v) / len(v) for k, v in acc.items()}
