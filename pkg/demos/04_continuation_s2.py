# %% [markdown]
# # From fractional Sobolev to Onofri on S^2
#
# A0(gamma) is the normalised Sobolev deficit term and B0(gamma) the weighted
# extension energy bounding it.  As gamma -> 1 both tend to the two sides of
# the Onofri inequality.

# %%
from fracsobolev import extrapolate_limit, parse_builtin, sweep

omega = parse_builtin("zonal:0.3cos+0.1cos^2", n=2)
records = sweep(2, omega, [0.9, 0.95, 0.99, 0.995, 0.999])
print(f"{'gamma':>7} {'A0':>10} {'B0':>10}")
for r in records:
    print(f"{r.gamma:7.3f} {r.A:10.6f} {r.B:10.6f}")

# %%
ex = extrapolate_limit(records[-3:])
print(f"A0 -> {ex.A_inf:.6f}, Onofri target {records[0].target_A:.6f}")
print(f"B0 -> {ex.B_inf:.6f}, Dirichlet energy {records[0].target_B:.6f}")
