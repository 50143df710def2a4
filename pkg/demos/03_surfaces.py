# %% [markdown]
# # Angle fields on surfaces in ℂ²
#
# A parametrized surface gets a Kähler angle at every point. The graph of a
# holomorphic function is a complex curve, so the angle is zero throughout.
# The graph of an antiholomorphic function is Lagrangian. A tilted family
# sweeps through every value in between.

# %%
import math

import numpy as np

from wirtinger import angle_field, catalog_chart, field_summary, gradient_field

grid = [(-1, 1, 21), (-1, 1, 21)]
for name in ("holomorphic-graph", "conjugate-graph"):
    s = field_summary(gradient_field(angle_field(catalog_chart(name, grid))))
    print(name, s.fractions)

# %% [markdown]
# In the slant family the plane at parameter u makes angle α = π/2 - u,
# so |∇α| should equal 1 everywhere on the interior.

# %%
chart = catalog_chart("slant-family", [(-1, 1, 5), (0, math.pi / 2, 41)])
af = gradient_field(angle_field(chart), chart)
print("alpha along u:", np.round(af.alpha[2, ::10], 4))
print("grad norm:", np.round(af.grad_alpha_norm[2, 1:-1:10], 12))
print("flags at the ends:", af.flags[2 * 41], af.flags[2 * 41 + 40])
