# %% [markdown]
# # Sobolev and Onofri deficits
#
# Deficits are energy minus the sharp lower bound.  They vanish on the
# conformal family and are positive elsewhere.

# %%
import numpy as np

from fracsobolev import (
    FunctionSpec, conformal_weight, fractional_extremizer, onofri_deficit_s2,
    paneitz_onofri_deficit_s4, parse_builtin, sobolev_deficit,
)
from fracsobolev.spectral import random_coefficients

for a in (0.0, 0.3, 0.6):
    rep = sobolev_deficit(fractional_extremizer(2, 0.5, a), 2, 0.5)
    print(f"extremizer a={a}: relative deficit {rep.relative:.2e}")

# %% [markdown]
# A random band-limited function sits strictly above the bound.

# %%
rng = np.random.default_rng(7)
f = FunctionSpec.from_coefficients(random_coefficients(2, 6, rng))
for g in (0.25, 0.5, 0.75):
    print(f"gamma={g}: relative deficit {sobolev_deficit(f, 2, g).relative:.4f}")

# %% [markdown]
# The logarithmic endpoints: Onofri on S^2 and its fourth-order analogue on S^4.

# %%
for a in (0.1, 0.5, 0.7):
    print(f"Onofri, conformal weight a={a}: {onofri_deficit_s2(conformal_weight(2, a)).deficit:.2e}")
print("Onofri, 0.5 cos^2:", onofri_deficit_s2(parse_builtin("zonal:0.5cos^2", n=2)).deficit)
print("Paneitz-Onofri, weight a=0.3:",
      paneitz_onofri_deficit_s4(conformal_weight(4, 0.3)).deficit)
print("Paneitz-Onofri, 0.4 cos^2:",
      paneitz_onofri_deficit_s4(parse_builtin("zonal:0.4cos^2", n=4)).deficit)
