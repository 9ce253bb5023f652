"""Uniform sampling of valid plans."""

import numpy as np

__all__ = ["PlanSampler", "replace_duplicates"]


class PlanSampler:
    """Draws plans whose position ``j`` is uniform over ``holding[j]``.

    ``holding`` is a sequence of site-id arrays, one per query relation.
    """

    def __init__(self, holding):
        self.n = len(holding)
        self.lengths = np.array([len(h) for h in holding])
        self.table = np.zeros((self.n, self.lengths.max()), dtype=np.int64)
        for j, h in enumerate(holding):
            self.table[j, : len(h)] = h
        self.space_size = int(np.prod(self.lengths, dtype=object))

    def draw(self, rng, count):
        """``(count, n)`` array of plans; consumes ``count * n`` uniforms."""
        u = rng.random((count, self.n))
        idx = np.minimum((u * self.lengths).astype(np.int64), self.lengths - 1)
        return self.table[np.arange(self.n)[None, :], idx]

    def draw_one(self, rng):
        return tuple(self.draw(rng, 1)[0].tolist())


def replace_duplicates(plans, taken, sampler, rng, tries=10):
    """Swap plans already in ``taken`` for fresh uniform draws.

    Gives up on a slot after ``tries`` draws (small spaces must repeat).
    ``taken`` is updated in place.
    """
    out = []
    for plan in plans:
        for _ in range(tries):
            if plan not in taken:
                break
            plan = sampler.draw_one(rng)
        taken.add(plan)
        out.append(plan)
    return out
