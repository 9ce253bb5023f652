"""Uniform entry point over the three optimizers."""

from . import ga, tlbo
from .errors import ValidationError

__all__ = ["ALGORITHMS", "make_config", "optimize"]

ALGORITHMS = ("tlbo", "vega", "agga")

_GA_ONLY = ("crossover_probability", "mutation_probability", "weights")


def make_config(algo, **params):
    """Build the config object for ``algo``; ``None`` values mean default.

    GA-only parameters are dropped for TLBO and ``mode`` is dropped for the
    GAs (which always search the discrete plan space), so callers can pass
    one shared parameter set.
    """
    if algo not in ALGORITHMS:
        raise ValidationError(f"unknown algorithm {algo!r}; expected one of {ALGORITHMS}")
    params = {k: v for k, v in params.items() if v is not None}
    if algo == "tlbo":
        for k in _GA_ONLY:
            params.pop(k, None)
        try:
            return tlbo.TlboConfig(**params)
        except TypeError as exc:
            raise ValidationError(str(exc)) from None
    mode = params.pop("mode", "discrete")
    if mode != "discrete":
        raise ValidationError(f"{algo} only supports mode 'discrete'")
    try:
        return ga.GaConfig(**params)
    except TypeError as exc:
        raise ValidationError(str(exc)) from None


def optimize(algo, rsm, catalog, query, config, evaluator=None):
    if algo == "tlbo":
        return tlbo.run(rsm, catalog, query, config, evaluator=evaluator)
    if algo == "agga":
        return ga.ga_aggregation(rsm, catalog, query, config, evaluator=evaluator)
    if algo == "vega":
        return ga.vega(rsm, catalog, query, config, evaluator=evaluator)
    raise ValidationError(f"unknown algorithm {algo!r}")
