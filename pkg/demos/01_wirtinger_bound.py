# %% [markdown]
# # The Kähler angle and the Wirtinger bound
#
# For an oriented 2m-plane W in a Hermitian vector space, the restriction of
# the Kähler form's m-th power to W is a multiple of the volume form. That
# multiple is cos α, and it can never exceed 1 in absolute value. Here we
# sample planes and watch the bound hold.

# %%
import numpy as np

from wirtinger import (
    OrientedSubspace,
    angle_report,
    complex_subspace,
    random_compatible,
    standard_structure,
)

rng = np.random.default_rng(0)

# %% [markdown]
# Start in standard ℂ² with coordinates (x1, y1, x2, y2). The complex line
# {z2 = 0} is spanned by e1 and J e1 = e2. The plane spanned by e1 and e3
# holds two real axes, and ω vanishes on it.

# %%
c2 = standard_structure(2)
for label, vecs in [
    ("complex line", [[1, 0, 0, 0], [0, 1, 0, 0]]),
    ("same line, reversed", [[0, 1, 0, 0], [1, 0, 0, 0]]),
    ("totally real plane", [[1, 0, 0, 0], [0, 0, 1, 0]]),
]:
    r = angle_report(c2, vecs)
    print(f"{label:22s} cos a = {r.cos_alpha:+.3f}  {r.classification}")

# %% [markdown]
# Random compatible structures on ℝ⁸ paired with random 4-planes give
# values spread inside [-1, 1] that never reach the ends.

# %%
s = random_compatible(4, rng)
samples = [angle_report(s, OrientedSubspace(rng.standard_normal((4, 8)))).cos_alpha for _ in range(2000)]
print("range:", min(samples), max(samples))
print(np.histogram(samples, bins=8, range=(-1, 1))[0])

# %% [markdown]
# The equality case is a J-invariant plane, oriented by J itself.

# %%
w = complex_subspace(s, rng.standard_normal((2, 8)))
r = angle_report(s, w)
print(r.cos_alpha, r.classification, r.complexity_residual)
