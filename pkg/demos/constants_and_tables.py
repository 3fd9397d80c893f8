# %% [markdown]
# # Constants and gap tables
#
# The gap thresholds are built from two families of constants: the
# Wirtinger constants c_k and the Krein-Favard constants K_m. This script
# computes both, then rebuilds the three threshold tables and shows
# which printed cells disagree with the recomputation.

# %%
import math

from siss.constants import krein_favard, wirtinger_constant
from siss.tables import TableSpec, render_table, table_markdown

# %% [markdown]
# ## Wirtinger constants
#
# The BVP solver and the tabulated values should agree, and the two bounds
# should bracket both.

# %%
for r in (1, 2, 3):
    bvp = wirtinger_constant(r, "numeric-bvp")
    table = wirtinger_constant(r, "exact-table")
    lo = wirtinger_constant(r, "bound-lower").value
    hi = wirtinger_constant(r, "bound-upper").value
    print(f"r={r}: bvp {bvp.value:.6f} (+-{bvp.uncertainty:.1e})  table {table.value:.6f}  "
          f"bounds [{lo:.4g}, {hi:.4g}]")

# %% [markdown]
# The upper bound follows sqrt(8 pi r) (4r/e)^(2r) closely for large r.
# The lower bound sits about a factor 2r below it.

# %%
for r in (5, 10, 20, 40):
    scale = math.sqrt(8 * math.pi * r) * (4 * r / math.e) ** (2 * r)
    lo = wirtinger_constant(r, "bound-lower").value / scale
    hi = wirtinger_constant(r, "bound-upper").value / scale
    print(f"r={r:2d}: lower/scale {lo:.4f}  2r*lower/scale {2 * r * lo:.4f}  upper/scale {hi:.4f}")

# %% [markdown]
# ## Krein-Favard constants

# %%
for m in range(8):
    K = krein_favard(m)
    print(f"K_{m} = {K.value:.15f}  ({K.terms_used} terms, remainder < {K.remainder_bound:.1e})")

# %% [markdown]
# ## Tables
#
# Rows with any cell outside 2e-3 of the printed value are tagged whole, and
# the printed number is shown in brackets.

# %%
for name in ("T1", "T2", "T3"):
    print(name)
    print(table_markdown(render_table(TableSpec(name))))
