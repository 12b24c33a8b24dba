# %% [markdown]
# # Eigenvalues of the fractional conformal operators
#
# On S^n the order-2g conformal operator acts on degree-l spherical
# harmonics by Gamma(l + n/2 + g) / Gamma(l + n/2 - g).  This script tabulates
# that multiplier and checks the two integer orders against polynomials.

# %%
import numpy as np

from fracsobolev import multiplier_P2gamma, sharp_constants, spectral_multiplier

for g in (0.25, 0.5, 0.75):
    mu = spectral_multiplier(2, g, 6).eigenvalues
    print(f"S^2, gamma={g}:", np.round(mu, 4))

# %% [markdown]
# gamma = 1 is the conformal Laplacian l(l+n-1) + n(n-2)/4, and on S^4
# gamma = 2 is the Paneitz operator l(l+1)(l+2)(l+3).

# %%
l = np.arange(8)
print("conformal Laplacian on S^3:", [multiplier_P2gamma(3, 1.0, k) for k in l])
print("closed form            :", (l * (l + 2) + 0.75).tolist())
print("Paneitz on S^4          :", [multiplier_P2gamma(4, 2.0, k) for k in l])

# %% [markdown]
# The constant mode sets the Q-curvature and the sharp Sobolev constant.

# %%
for n, g in [(2, 0.5), (3, 0.8), (4, 1.5)]:
    c = sharp_constants(n, g)
    print(f"n={n} gamma={g}: Y={c.Y:.6f} Q={c.Q:.6f} exponent={c.exponent:.4f}")
