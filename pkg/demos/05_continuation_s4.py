# %% [markdown]
# # From fractional Sobolev to Paneitz-Onofri on S^4
#
# The fourth-order analogue uses the adapted defining function of the five
# dimensional ball.  A1 converges to the Paneitz-Onofri target.  B1 is still
# about 14% above the Paneitz energy at gamma = 1.99, because the cutoff
# transition contributes an O(2 - gamma) term with a large constant.

# %%
from fracsobolev import extrapolate_limit, parse_builtin, sweep
from fracsobolev.continuation import B1_parts, ExtensionProfile, curvature_combination

omega = parse_builtin("zonal:0.2cos", n=4)
records = sweep(4, omega, [1.9, 1.95, 1.98, 1.99])
for r in records:
    print(f"gamma={r.gamma:.3f}  A1={r.A:.5f}  B1={r.B:.5f}")
print(f"targets: A {records[0].target_A:.5f}, B {records[0].target_B:.5f}")

# %%
parts = B1_parts(1.99, ExtensionProfile(omega))
print(f"B1(1.99): transition {parts.inner:.4f} + boundary layer {parts.outer:.4f}")
for deg in (1, 2):
    ex = extrapolate_limit(records, degree=deg)
    print(f"degree {deg}: A1 -> {ex.A_inf:.5f}, B1 -> {ex.B_inf:.5f}")

# %%
for g in (1.8, 1.9, 1.99):
    c = curvature_combination(g)
    print(f"gamma={g}: curvature combination target {c.target:.4f}, C = {c.C:.2f}")
