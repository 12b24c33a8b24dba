# %% [markdown]
# # The adapted boundary defining function
#
# The radial Riccati equation for F = T' is integrated from the origin to
# 1 - 1e-6.  Its solution gives rho_*, which sits between rho_0 and rho_L, and
# the curvature of the conformally compact metric rho_*^-2 |dx|^2.

# %%
import numpy as np

from fracsobolev import boundary_expansion_fit, closed_form_definers, solve_adapted
from fracsobolev.defining import boundary_limits, check_radial_bounds

sol = solve_adapted(4, 3.8)
d = closed_form_definers(sol.r_grid)
for i in np.linspace(0, len(sol.r_grid) - 1, 6).astype(int):
    print(f"r={sol.r_grid[i]:.6f}  rho_0={d.rho_0[i]:.3e}  rho_*={sol.rho_star[i]:.3e}  "
          f"rho_L={d.rho_L[i]:.3e}")

# %% [markdown]
# Observed values at the last node next to their boundary limits.

# %%
for key, (obs, target, rel) in boundary_limits(sol).items():
    print(f"{key:5s} {obs: .6f}  limit {target: .6f}  rel {rel:.1e}")

rep = check_radial_bounds(sol)
print("bound violations:", rep["violations"])

# %% [markdown]
# Near the boundary rho_*/rho = 1 + c2 rho^2 + cg rho^(2 gamma) + ...
# The fitted rho^(2 gamma) coefficient matches the scattering constant divided
# by n - s, the power that turns the eigenfunction into a defining function.

# %%
fit = boundary_expansion_fit(solve_adapted(4, 3.6, delta=1e-9))
print(f"c2 = {fit.rho2:.6f} (expected {fit.expected_rho2:.6f})")
print(f"cg = {fit.rho2gamma:.6f}; Gamma-ratio/d_gamma = {fit.expected_rho2gamma_stated:.6f}; "
      f"divided by n-s = {fit.expected_rho2gamma_scaled:.6f}")
