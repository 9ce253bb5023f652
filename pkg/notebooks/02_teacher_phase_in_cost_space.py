# ---
# jupyter:
#   jupytext:
#     formats: py:percent
# ---

# %% [markdown]
# # Teacher and learner phases on cost vectors
#
# In faithful mode each learner is the cost vector (qac, qlc, lpc) of a
# plan and moves freely in that space. The bundled worked population
# lets us check one teacher phase against reference 4-decimal values.

# %%
import numpy as np

from planforge import tlbo
from planforge.costmodel import sphere_fitness
from planforge.samples import worked_population

before, after = worked_population()
pop = [tlbo.Learner(r[:3].copy(), sphere_fitness(r[:3]), plan=(i + 1,)) for i, r in enumerate(before)]

teacher = tlbo.select_teacher(pop)
mean = tlbo.mean_result(pop)
print("teacher: learner", teacher.plan[0], "fitness", round(teacher.fitness, 4))
print("class mean:", np.round(mean, 4))

# %% [markdown]
# The reference shift is one difference vector for the whole class.
# Dividing it by (teacher - 2 * mean) recovers the per-dimension r.

# %%
difference = after[0, :3] - before[0, :3]
print("difference:", np.round(difference, 4))
print("implied r (T_F = 2):", np.round(difference / (teacher.position - 2 * mean), 4))

# %%
moved = tlbo.teacher_phase(pop, rng=None, difference=np.array([-0.5906, -0.7860, -0.1799]))
got = np.array([l.position for l in moved])
print("max deviation from the reference update:", np.abs(got - after[:, :3]).max())

# %% [markdown]
# A seeded learner phase then accepts only improving moves.

# %%
rng = np.random.default_rng(5)
learned = tlbo.learner_phase(moved, rng)
for a, b in list(zip(moved, learned))[:6]:
    print(a.plan[0], round(a.fitness, 4), "->", round(b.fitness, 4))
print("improved:", sum(b.fitness < a.fitness for a, b in zip(moved, learned)), "of 20")
