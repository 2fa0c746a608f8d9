# %% [markdown]
# # Theta and Riemann's function
#
# The antiderivative of the theta boundary series, scaled by pi, is
# Riemann's sum of sin(2 pi n^2 x) / n^2. Here the library evaluates it,
# measures its global Hölder exponent and its derivative at x = 1/2.

# %%
import math

import numpy as np

from autodist.evaluation import GridSpec, antiderivative_eval, grid_eval
from autodist.hoelder import dyadic_scales, global_exponent, predict_regularity
from autodist.rational import RationalPoint, difference_quotients
from autodist.series import theta_series

theta = theta_series(10 ** 6)
print(theta.metadata())

# %% [markdown]
# Sanity check against the sine sum written out directly.

# %%
x = 0.3
n = np.arange(1, 1001, dtype=float)
direct = np.sum(np.sin(2 * np.pi * n * n * x) / (n * n))
print("library", math.pi * antiderivative_eval(theta, 0, x, 10 ** 6).real)
print("direct ", direct)

# %% [markdown]
# A coarse picture of the graph, as text: min and max over ten bins.

# %%
g = GridSpec(0.0, 1.0, 4001)
vals = math.pi * grid_eval(theta, 0, g, 10 ** 6).real
for chunk_x, chunk in zip(np.array_split(g.nodes(), 10), np.array_split(vals, 10)):
    print(f"[{chunk_x[0]:.2f}, {chunk_x[-1]:.2f}]  min {chunk.min():+.3f}  max {chunk.max():+.3f}")

# %% [markdown]
# Global exponent. The predicted class for theta itself is C^-1/2, so the
# antiderivative should come out near 1/2.

# %%
print(predict_regularity(theta.params))
est = global_exponent(theta_series(4 * 10 ** 5), 0, dyadic_scales(6, 16), 2 ** 18, 10 ** 5)
print(f"exponent {est.exponent:.3f}  fit residual {est.fit_residual:.3f}  "
      f"gate {est.stability_delta:.1e}  stable={est.stable}")

# %% [markdown]
# Centered difference quotients at 1/2 settle at -pi.

# %%
est = difference_quotients(theta, RationalPoint(1, 2), [2.0 ** -j for j in range(8, 15)], 10 ** 6)
for h, qv in est.scales:
    print(f"h = 2^{math.log2(h):.0f}   pi * quotient = {math.pi * qv:+.5f}")
print("finest stable:", est.finest_stable, " value:", math.pi * est.value)
