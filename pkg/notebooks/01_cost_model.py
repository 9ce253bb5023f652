# ---
# jupyter:
#   jupytext:
#     formats: py:percent
# ---

# %% [markdown]
# # The three plan costs
#
# A plan puts every relation of the query on one of the sites holding a
# replica of it. We score each plan on affinity (how scattered it is),
# localization (how many tuples travel to the control site) and local
# processing.

# %%
import numpy as np

from planforge import Evaluator, cost_vector, qac, qlc, sample_instance, sphere_fitness
from planforge.sampling import PlanSampler

rsm, catalog, query = sample_instance()
print(len(rsm.sites), "sites,", len(rsm.relations), "relations")
print("FROM order:", query.relations)

# %% [markdown]
# Affinity only looks at how sites repeat inside the plan.

# %%
for plan in [(8, 8, 8, 8, 7, 7, 8, 8), (1, 1, 2, 2, 2, 3, 5, 3), (1, 2, 5, 7, 2, 4, 6, 8)]:
    print(plan, round(qac(plan), 5))

# %% [markdown]
# Localization picks the control site that keeps the most tuples in
# place. With a uniform catalog that is simply the most used site.

# %%
plan = (1, 1, 2, 2, 2, 3, 5, 3)
cost, site = qlc(plan, catalog, query)
print(f"qlc {cost} at site {site}")
cv = cost_vector(plan, rsm, catalog, query)
print(cv, "sphere", round(sphere_fitness(cv), 5))

# %% [markdown]
# Distribution over 20 000 uniform plans, using the batch evaluator.

# %%
ev = Evaluator(rsm, catalog, query)
plans = PlanSampler(ev.holding).draw(np.random.default_rng(0), 20_000)
q_ac, q_lc, l_pc, control = ev.evaluate_batch(plans)
f = q_ac**2 + q_lc**2 + l_pc**2
for name, arr in [("qac", q_ac), ("qlc", q_lc), ("lpc", l_pc), ("sphere", f)]:
    lo, med, hi = np.percentile(arr, [0, 50, 100])
    print(f"{name:7s} min {lo:.4f}  median {med:.4f}  max {hi:.4f}")

# %%
# how often each site ends up as the control site
sites, counts = np.unique(control, return_counts=True)
print(dict(zip(sites.tolist(), counts.tolist())))
