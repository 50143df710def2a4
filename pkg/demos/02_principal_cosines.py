# %% [markdown]
# # Principal cosines
#
# Restrict ω to W and bring the resulting skew form into block-diagonal shape
# in an orthonormal frame. Each 2×2 block carries one number λ_k, and cos α is
# their product. So cos α = ±1 forces every |λ_k| = 1, which means W is
# complex.

# %%
import numpy as np

from wirtinger import (
    OrientedSubspace,
    pfaffian,
    principal_angles,
    pullback_form,
    random_compatible,
    skew_canonical,
)

rng = np.random.default_rng(1)
s = random_compatible(5, rng)
w = OrientedSubspace(rng.standard_normal((6, 10)))

# %%
frame, omega = pullback_form(s, w)
cf = skew_canonical(omega)
print("lambdas:", np.round(cf.lambdas, 6))
print("product:", np.prod(cf.lambdas), " Pfaffian:", pfaffian(omega))
print("reconstruction error:", np.abs(cf.reconstruct() - omega.array).max())

# %% [markdown]
# Reversing the orientation flips the sign of the last principal cosine only.

# %%
print(principal_angles(s, w))
print(principal_angles(s, w.reversed()))
