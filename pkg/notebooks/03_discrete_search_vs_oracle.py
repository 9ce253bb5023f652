# ---
# jupyter:
#   jupytext:
#     formats: py:percent
# ---

# %% [markdown]
# # Discrete search against exhaustive enumeration
#
# On a small generated instance the oracle gives the exact best plans, so
# we can count how often each optimizer lands on the optimum.

# %%
import numpy as np

from planforge import Evaluator, exact_topk, generate_instance, make_config, optimize
from planforge.oracle import count_plans

rsm, catalog, query = generate_instance(8, 4, 4, 1006)
print(count_plans(rsm, query), "valid plans")
for plan, f, cv in exact_topk(rsm, catalog, query, 5):
    print(plan, f"{f:.3e}", "control", cv.control_site)

# %% [markdown]
# This instance is a trap: only one site holds every relation, so the
# all-on-one-site plan is isolated from a broad local optimum.

# %%
targets = {
    "tlbo": exact_topk(rsm, catalog, query, 1)[0][1],
    "vega": exact_topk(rsm, catalog, query, 1)[0][1],
    "agga": exact_topk(rsm, catalog, query, 1, fitness="weighted")[0][1],
}
ev = Evaluator(rsm, catalog, query)
for algo, target in targets.items():
    for policy in ("resample", "keep"):
        hits, first = 0, []
        for seed in range(30):
            rep = optimize(algo, rsm, catalog, query, make_config(algo, seed=seed, duplicates=policy), ev)
            hits += rep.best.fitness == target
            t = next((row["iteration"] for row in rep.trace if row["best_fitness"] == target), None)
            if t is not None:
                first.append(t)
        mean_t = np.mean(first) if first else float("nan")
        print(f"{algo} duplicates={policy:8s} found {hits}/30, mean first hit at iteration {mean_t:.1f}")

# %% [markdown]
# Convergence of one TLBO run, every 10 iterations.

# %%
rep = optimize("tlbo", rsm, catalog, query, make_config("tlbo", seed=3), ev)
for row in rep.trace[::10]:
    print(row["iteration"], f"{row['best_fitness']:.3e}", row["evaluations"])
