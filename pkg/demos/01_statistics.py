# %% [markdown]
# # Concomitant differences by hand
#
# Pair each input with its output, sort by input, and look at how the
# outputs step from one neighbour to the next.  A smooth transfer gives
# small steps that mostly share a sign; additive noise gives many steps of
# both signs whose total length grows with the sample.

# %%
import numpy as np

from intrusion_detect import (
    IncrementalState,
    PairedSample,
    compute_stats,
    concomitant_sort,
    prefix_trajectory,
)

sample = PairedSample.from_pairs([(0.4, 1.0), (0.1, 3.0), (0.9, 2.0), (0.6, 5.0), (0.2, 0.0)])
series = concomitant_sort(sample)
print("concomitants:", series.y_ordered.tolist())
print("differences: ", np.diff(series.y_ordered).tolist())

t = compute_stats(series)
print(f"A={t.a:.6f}  B={t.b:.6f}  I={t.i:.6f}")

# %% [markdown]
# `I` only depends on the two extreme concomitants and the total variation:
# `I = 1/2 + (last - first) / (2 * sum|d|)`.

# %%
d = np.diff(series.y_ordered)
print("identity:", 0.5 + (series.y_ordered[-1] - series.y_ordered[0]) / (2 * np.abs(d).sum()))

# %% [markdown]
# Streaming arrivals: a sorted-insertion state updates the sums in
# logarithmic time per point and agrees with batch recomputation.

# %%
state = IncrementalState()
for x, y in zip(sample.x, sample.y):
    print(f"insert x={x:.1f} y={y:.1f} ->", state.insert(x, y))

batch = prefix_trajectory(sample)
print("batch final:", batch.final)
