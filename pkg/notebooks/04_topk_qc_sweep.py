# ---
# jupyter:
#   jupytext:
#     formats: py:percent
# ---

# %% [markdown]
# # Iterations to reach Top-K plans under a query-cost threshold
#
# A sweep runs each (algorithm, instance, seed) once and reads off, for
# every K and QC, the first iteration at which K distinct plans had
# query cost at or below QC. The same runs could be made from the shell
# with `planforge sweep spec.yaml --out sweep.csv`.

# %%
import numpy as np

from planforge.sweep import load_sweep_spec, mean_iterations, read_sweep_csv, run_sweep, write_sweep_csv

spec = load_sweep_spec("""
algorithms: [tlbo, vega, agga]
k_values: [5, 10, 20]
qc_thresholds: [0.2, 0.3, 0.4, 0.5, 0.6, 0.7]
instances: [[8, 4, 5], [10, 5, 5]]
seeds: [0, 1, 2, 3, 4, 5, 6, 7, 8, 9]
instance_seed: 1
""")
rows = read_sweep_csv(write_sweep_csv(run_sweep(spec, threads=0)))
print(len(rows), "cells")

# %% [markdown]
# Mean over seeds; a cell never reached counts as max_iterations + 1.

# %%
means = mean_iterations(rows, spec.max_iterations)
for ns, nr, _ in spec.instances:
    print(f"\nN_s={ns} N_r={nr}")
    print("algo  K   " + "  ".join(f"qc={q:.1f}" for q in spec.qc_thresholds))
    for algo in ("agga", "tlbo", "vega"):
        for k in spec.k_values:
            vals = [means[(algo, ns, nr, k, q)] for q in spec.qc_thresholds]
            print(f"{algo}  {k:2d}  " + "  ".join(f"{v:6.1f}" for v in vals))

# %%
# evaluations spent until the goal, averaged over all cells
for algo in ("agga", "tlbo", "vega"):
    ev = [r["evals"] for r in rows if r["algo"] == algo and r["iterations_to_topk"] is not None]
    print(algo, "mean evaluations to goal:", round(float(np.mean(ev)), 1))
