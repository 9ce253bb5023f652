"""``planforge`` command line.

Subcommands::

    planforge optimize --algo tlbo --seed 7 --out report.json
    planforge oracle --k 20 --out top20.csv
    planforge generate --sites 16 --relations 8 --degree 5 --seed 1 --out inst/
    planforge sweep sweep.yaml --out sweep.csv

``optimize`` and ``oracle`` read ``--rsm``/``--catalog``/``--query`` and fall
back to the bundled 16-site example for any file not given.

Exit codes: 0 success, 1 runtime failure, 2 invalid input, 3 plan space
too large to enumerate.
"""

import argparse
import json
import sys
from pathlib import Path

from .catalog import load_catalog, load_rsm
from .costmodel import DEFAULT_WEIGHTS
from .errors import ParseError, PlanforgeError, SaturationError, SemanticError, UnknownRelationError, ValidationError
from .generate import generate_instance, write_instance
from .oracle import DEFAULT_BOUND, exact_topk, write_topk_csv
from .query import parse_query
from .runner import ALGORITHMS, make_config, optimize
from .samples import sample_text
from .sweep import load_sweep_spec, run_sweep, write_sweep_csv

EXIT_OK, EXIT_RUNTIME, EXIT_VALIDATION, EXIT_SATURATION = 0, 1, 2, 3


class UsageError(Exception):
    """Bad input attributable to a flag or file; carries the exit-2 message."""


def _read(path, flag, kind):
    if path is None:
        return sample_text(kind), f"<bundled {kind}>"
    try:
        return Path(path).read_text(encoding="utf-8"), path
    except OSError as exc:
        raise UsageError(f"{flag} {path}: {exc.strerror or exc}") from None


def _load_instance(args):
    """Load the three instance files, naming the flag/file in any error."""
    texts = {
        "rsm": _read(args.rsm, "--rsm", "rsm"),
        "catalog": _read(args.catalog, "--catalog", "catalog"),
        "query": _read(args.query, "--query", "query"),
    }
    try:
        rsm = load_rsm(texts["rsm"][0])
    except (ParseError, ValidationError) as exc:
        raise UsageError(f"--rsm {texts['rsm'][1]}: {exc}") from None
    try:
        catalog = load_catalog(texts["catalog"][0], rsm)
    except (ParseError, ValidationError, UnknownRelationError) as exc:
        raise UsageError(f"--catalog {texts['catalog'][1]}: {exc}") from None
    try:
        query = parse_query(texts["query"][0])
    except (ParseError, SemanticError, ValidationError) as exc:
        raise UsageError(f"--query {texts['query'][1]}: {exc}") from None
    missing = [r for r in query.relations if r not in rsm.relations]
    if missing:
        raise UsageError(f"--query {texts['query'][1]}: relation {missing[0]} not in --rsm")
    try:
        catalog.covers(query.relations)
    except ValidationError as exc:
        raise UsageError(f"--catalog {texts['catalog'][1]}: {exc}") from None
    sources = {k: v[1] for k, v in texts.items()}
    return rsm, catalog, query, sources


def _weights(text):
    try:
        parts = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}") from None
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated weights")
    return parts


def _write(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"--out {out}: {exc.strerror or exc}") from None


def _fmt_plan(plan):
    return "(" + ", ".join(str(s) for s in plan) + ")"


def cmd_optimize(args):
    rsm, catalog, query, sources = _load_instance(args)
    params = dict(
        population_size=args.pop,
        max_iterations=args.iters,
        seed=args.seed,
        top_k=args.k,
        qc_threshold=args.qc,
        stagnation_window=args.stagnation,
        duplicates=args.duplicates,
        mode=args.mode,
        crossover_probability=args.pc,
        mutation_probability=args.pm,
        weights=args.weights,
    )
    try:
        config = make_config(args.algo, **params)
    except ValidationError as exc:
        raise UsageError(str(exc)) from None
    report = optimize(args.algo, rsm, catalog, query, config)
    doc = report.to_dict()
    doc["instance"] = sources
    _write(json.dumps(doc, indent=2) + "\n", args.out)

    summary = sys.stderr if args.out in (None, "-") else sys.stdout
    best = report.best
    print(
        f"{report.algorithm} ({report.mode}): {report.iterations} iterations, "
        f"{report.evaluations} evaluations, stopped by {report.termination_reason}",
        file=summary,
    )
    print(
        f"best plan {_fmt_plan(best.plan)} fitness {best.fitness:.6f} "
        f"(qac {best.qac:.4f}, qlc {best.qlc:.4f}, lpc {best.lpc:.4f}, control site {best.control_site})",
        file=summary,
    )
    if args.out not in (None, "-"):
        print(f"report written to {args.out}", file=summary)
    return EXIT_OK


def cmd_oracle(args):
    rsm, catalog, query, _ = _load_instance(args)
    try:
        top = exact_topk(
            rsm, catalog, query, args.k,
            fitness=args.fitness, weights=args.weights or DEFAULT_WEIGHTS, bound=args.bound,
        )
    except ValidationError as exc:
        raise UsageError(str(exc)) from None
    _write(write_topk_csv(top), args.out)
    return EXIT_OK


def cmd_generate(args):
    try:
        rsm, catalog, query = generate_instance(args.sites, args.relations, args.degree, args.seed)
    except ValidationError as exc:
        raise UsageError(str(exc)) from None
    for path in write_instance(args.out, rsm, catalog, query):
        print(path)
    return EXIT_OK


def cmd_sweep(args):
    text, _ = _read(args.spec, "spec", None)
    try:
        spec = load_sweep_spec(text)
    except (ParseError, ValidationError) as exc:
        raise UsageError(f"{args.spec}: {exc}") from None
    try:
        rows = run_sweep(spec, threads=args.threads)
    except ValidationError as exc:
        raise UsageError(str(exc)) from None
    _write(write_sweep_csv(rows), args.out)
    return EXIT_OK


def _instance_flags(p):
    p.add_argument("--rsm", metavar="PATH", help="relation-site matrix CSV (default: bundled example)")
    p.add_argument("--catalog", metavar="PATH", help="catalog YAML (default: bundled uniform catalog)")
    p.add_argument("--query", metavar="PATH", help="SQL query file (default: bundled example query)")


def build_parser():
    parser = argparse.ArgumentParser(prog="planforge", description="Query plan selection over replicated relations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="run one optimizer and write a JSON report")
    _instance_flags(p)
    p.add_argument("--algo", choices=ALGORITHMS, default="tlbo")
    p.add_argument("--mode", choices=("faithful", "discrete"), default=None,
                   help="TLBO search space (default discrete; GAs are always discrete)")
    p.add_argument("--k", type=int, default=None, help="stop once K distinct plans are within --qc")
    p.add_argument("--qc", type=float, default=None, help="query-cost threshold for --k")
    p.add_argument("--iters", type=int, default=100, help="maximum iterations (default 100)")
    p.add_argument("--pop", type=int, default=20, help="population size (default 20)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stagnation", type=int, default=None, metavar="N",
                   help="stop after N iterations without improvement")
    p.add_argument("--duplicates", choices=("resample", "keep"), default=None,
                   help="replace repeated plans with fresh samples (default resample)")
    p.add_argument("--pc", type=float, default=None, help="crossover probability (GA, default 0.8)")
    p.add_argument("--pm", type=float, default=None, help="mutation probability (GA, default 0.2)")
    p.add_argument("--weights", type=_weights, default=None, metavar="a,b,c",
                   help="aggregation GA weights for qac,qlc,lpc (default 0.2,0.5,0.3)")
    p.add_argument("--out", metavar="PATH", default=None, help="report path (default stdout)")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("oracle", help="exact Top-K by exhaustive enumeration, as CSV")
    _instance_flags(p)
    p.add_argument("--k", type=int, default=20)
    p.add_argument("--fitness", choices=("sphere", "weighted"), default="sphere")
    p.add_argument("--weights", type=_weights, default=None, metavar="a,b,c")
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND, help="maximum plans to enumerate")
    p.add_argument("--out", metavar="PATH", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("generate", help="write a random instance (rsm.csv, catalog.yaml, query.sql)")
    p.add_argument("--sites", type=int, required=True, metavar="N_s")
    p.add_argument("--relations", type=int, required=True, metavar="N_r")
    p.add_argument("--degree", type=int, required=True, help="replicas per relation")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="DIR", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sweep", help="run an experiment sweep and write CSV")
    p.add_argument("spec", help="sweep spec (YAML or JSON)")
    p.add_argument("--out", metavar="PATH", default=None, help="CSV path (default stdout)")
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes (default $PLANFORGE_THREADS, else CPU count; 0 = sequential)")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"planforge: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SaturationError as exc:
        print(f"planforge: error: {exc}", file=sys.stderr)
        return EXIT_SATURATION
    except (ValidationError, ParseError, SemanticError, UnknownRelationError) as exc:
        print(f"planforge: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (PlanforgeError, OSError, ArithmeticError) as exc:
        print(f"planforge: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
