# %% [markdown]
# # Weight one, cancellation and figure data
#
# The weight-one form of level 23 has a continuous antiderivative. Its
# partial sums show square-root cancellation, and the figure presets
# write CSV data ready for any plotting tool.

# %%
import contextlib
import io

import numpy as np

from autodist.cli import main
from autodist.hoelder import criteria_exponent
from autodist.series import eta_series, langlands_convert, weight_one_23

w = weight_one_23(2 ** 13)
print("first coefficients", [int(w.coefficient(n).real) for n in range(1, 24)])

# %% [markdown]
# Growth of sup |partial sum| with N, in the Langlands normalization.

# %%
Ns = [2 ** j for j in range(6, 14)]
for label, s in [("weight_one_23", w), ("eta", eta_series(2 ** 13))]:
    slope, fr, sups = criteria_exponent(langlands_convert(s, "c_to_a"), 0, Ns, return_fit=True)
    print(f"{label}: slope {slope:.3f} (fit residual {fr:.3f})")

# %% [markdown]
# The fig4 preset through the command-line entry point; the largest jump
# between neighbouring samples shrinks as the grid is refined.

# %%
for grid in (1000, 4000, 16000):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        main(["figure", "fig4", "--grid", str(grid)])
    rows = [ln for ln in buf.getvalue().splitlines() if ln and not ln.startswith("#")][1:]
    y = np.array([float(r.split(",")[1]) for r in rows])
    print(f"grid {grid:5d}: max adjacent jump {np.abs(np.diff(y)).max():.2e}")
