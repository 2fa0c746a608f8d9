# %% [markdown]
# # Eta near rational points
#
# At a rational p/q the antiderivative splits into a few explicit terms plus
# a remainder that shrinks like a power of |p - q x|. For eta the translate
# at every rational is a unit multiple of eta itself, so every term is
# computable.

# %%
from fractions import Fraction

from autodist.rational import (RationalPoint, expansion_report, rational_class,
                               remainder_scaling)
from autodist.series import eta_series, eta_translates

M = 10 ** 12
eta = eta_series(M)
table = eta_translates(eta)

# %% [markdown]
# One report per point. `residual` is what is left after all terms,
# including the remainder, are added back: truncation error only.

# %%
for pq in [(0, 1), (1, 2), (2, 5), (3, 7)]:
    pt = RationalPoint(*pq)
    rep = expansion_report(eta, table, pt, pt.value + Fraction(1, 1000), 1, M)
    print(f"{pt}:  |lhs| {abs(rep.lhs):.3e}  remainder {abs(rep.remainder_term):.3e}  "
          f"residual {rep.residual:.1e}  |I_n| <= bound: "
          f"{abs(rep.remainder_integral) <= rep.remainder_bound}")

# %% [markdown]
# How fast the remainder shrinks at 0/1, for one and two explicit terms.

# %%
big = eta_series(10 ** 13)
t = eta_translates(big)
for order, j_max in [(0, 14), (1, 11)]:
    res = remainder_scaling(big, t, RationalPoint(0, 1), order,
                            [2.0 ** -j for j in range(5, j_max + 1)], 10 ** 13,
                            N_translate=10 ** 12)
    print(f"order {order}: slope {res.slope:.3f}  fit residual {res.fit_residual:.3f}")

# %% [markdown]
# Eta is cuspidal, so the derivative exists and vanishes at every rational.

# %%
for pq in [(0, 1), (1, 2), (1, 3), (2, 3), (5, 7), (-3, 8)]:
    print(pq, rational_class(eta, table, RationalPoint(*pq)))
