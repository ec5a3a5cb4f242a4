"""
Finding an oblique split
========================

An oblique split tests ``a_1 x_1 + ... + a_d x_d + a_{d+1} > 0``. The search
starts from the best axis-parallel cut, improves one coefficient at a time
(each step is an exact one-dimensional problem) and escapes local minima by
line searches along random directions.
"""

import numpy as np

from oc1 import SearchParams, SearchStats, best_axis_parallel, find_split, from_arrays

# Points labelled by the diagonal x1 + x2 < 1. No single threshold on one
# attribute can separate them.
rng = np.random.default_rng(0)
X = rng.uniform(size=(200, 2))
ds = from_arrays(X, (X.sum(axis=1) < 1).astype(int))

axis = best_axis_parallel(ds, "sum-minority")
print(f"best axis-parallel split: x{axis.axis[0] + 1} > {axis.axis[1]:.3f}, {axis.impurity:.0f} errors")

stats = SearchStats(record_traces=True)
split = find_split(ds, SearchParams(restarts=5, max_jumps=5), "sum-minority", stats=stats)
a = split.plane.coefficients
print(f"oblique split: {a[0]:+.3f} x1 {a[1]:+.3f} x2 {a[2]:+.3f} > 0, {split.impurity:.0f} errors")
print(f"hyperplanes scored: {split.evals}; improvements per restart: {list(split.improvements)}")

# Each restart's impurity never goes up. The first trace starts from the
# axis-parallel plane.
print("first restart trace:", [int(v) for v in stats.traces[0]])

# A staircase of two interleaved diagonal rows defeats coordinate moves: from
# the axis-parallel start, changing any one coefficient makes things worse.
# Random jumps move all coefficients at once and find the diagonal.
pts, labels = [], []
for i in range(6):
    pts += [(i, i + 1.5), (i + 1.5, i)]
    labels += [1, 0]
stairs = from_arrays(np.array(pts, float), labels)
stuck = find_split(stairs, SearchParams(restarts=0, max_jumps=0), "sum-minority")
rescued = find_split(stairs, SearchParams(restarts=0, max_jumps=20), "sum-minority")
print(f"\nstaircase without jumps: {stuck.impurity:.0f} errors; with jumps: {rescued.impurity:.0f} errors")
