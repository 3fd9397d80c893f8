# %% [markdown]
# # Gabor-type frames from row-wise sampling
#
# Each modulation node y_j carries its own sampling row X_j. With a window
# whose spectrum tiles the frequency axis, the total energy of the STFT
# samples sits between a * A and b * B. Here (a, b) comes from the
# covering sum and (A, B) from the per-row finite sections.

# %%
import numpy as np

from siss.gabor import (TimeFrequencyGrid, boxcar, gabor_frame_ratio, gabor_test_signals,
                        window_cover)
from siss.generators import make_generator
from siss.reconstruct import sampling_window
from siss.sampling import make_sampling_set

g = make_generator("sinc")
window = (-8, 7)

# %% [markdown]
# ## Covering sums for a width-1 boxcar spectrum

# %%
for label, Y in [("integers", {"step": 1.0}), ("half-integers", {"step": 0.5}),
                 ("even integers", {"step": 2.0})]:
    c = window_cover(boxcar(1.0), Y)
    print(f"{label:14s} a={c.a} b={c.b} covered={c.covered}")

# %% [markdown]
# ## Frame ratios for a few row densities

# %%
y = np.arange(-2.0, 3.0)
for h in (0.6, 0.8, 0.95):
    X = make_sampling_set("uniform", sampling_window(g, window), h=h)
    grid = TimeFrequencyGrid(y, [X] * len(y))
    rep = gabor_frame_ratio(g, grid, 1, gabor_test_signals(g, window, y, 20, seed=0), window)
    lo, hi = rep.sandwich
    print(f"h={h}: ratios in [{rep.lower:.4f}, {rep.upper:.4f}], sandwich [{lo:.4f}, {hi:.4f}]")

# %% [markdown]
# Rows with different densities: the compliance check uses the worst row.

# %%
rows = [make_sampling_set("jittered", sampling_window(g, window), h=0.7, amplitude=0.2, seed=j)
        for j in range(len(y))]
grid = TimeFrequencyGrid(y, rows)
print(grid.compliance(1, 1))
rep = gabor_frame_ratio(g, grid, 1, gabor_test_signals(g, window, y, 20, seed=1), window)
print(f"ratios in [{rep.lower:.4f}, {rep.upper:.4f}], sandwich {tuple(round(v, 4) for v in rep.sandwich)}")
