# %% [markdown]
# # Irrational points
#
# Convergents p/q of an irrational x0 give rationals very close to x0.
# Sampling between each convergent and x0 shows how fast the antiderivative
# oscillates there, compared with |x - x0|^alpha.

# %%
from autodist.diophantine import GOLDEN, SQRT2, convergents, liouville_blocks, measure_proxy
from autodist.hoelder import violation_scan
from autodist.series import eta_series

for name, x0 in [("golden", GOLDEN), ("sqrt2", SQRT2)]:
    cs = convergents(x0, 20)
    print(name, [(c.p, c.q) for c in cs[:6]], " proxy", round(measure_proxy(cs), 4))
print("Liouville-type proxy", round(measure_proxy(liouville_blocks(5)), 2))

# %% [markdown]
# Violation scan for eta at sqrt 2. Above the global exponent 3/4 the
# normalized maxima keep growing; below it they stay flat.

# %%
eta = eta_series(10 ** 15)
for alpha in (0.9, 0.6):
    rep = violation_scan(eta, None, SQRT2, alpha, 12)
    print(f"alpha = {alpha}: growth ratio {rep.growth_ratio:.2f}")
    print("   ", " ".join(f"{m:.2g}" for m in rep.sup_values))
