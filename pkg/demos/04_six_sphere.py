# %% [markdown]
# # The almost complex six-sphere
#
# Octonion multiplication gives a cross product on ℝ⁷. On the unit sphere,
# J_p(v) = p × v maps the tangent space at p to itself and squares to -1.
# This structure is not integrable, and its Nijenhuis tensor shows it.

# %%
import numpy as np

from wirtinger import chart_field, cross7, nijenhuis, s6_structure, validate

p = np.array([0.3, -0.2, 0.1, 0.5, 0.0, 0.4, 0.0])
p /= np.linalg.norm(p)
print(validate(s6_structure(p)).as_dict())

# %% [markdown]
# The cross product is alternating and |u × v| equals the parallelogram area
# for orthogonal unit vectors.

# %%
e = np.eye(7)
print(cross7(e[0], e[1]), np.linalg.norm(cross7(e[2], e[4])))

# %% [markdown]
# Pull J back through the orthographic chart at the north pole and
# differentiate. Constant coordinate fields X, Y with Y ≠ ±JX give |N| = 4 at
# the origin. The flat structure on ℝ⁶ gives exactly zero.

# %%
f = chart_field("s6-orthographic")
flat = chart_field("flat", [3])
x0 = np.zeros(6)
for a, b in [(0, 1), (1, 3), (0, 5)]:
    X, Y = np.eye(6)[a], np.eye(6)[b]
    print((a, b), np.linalg.norm(nijenhuis(f, x0, X, Y)), np.linalg.norm(nijenhuis(flat, x0, X, Y)))
