"""
Growing trees on oblique concepts
=================================

POL is two-class data cut by four parallel oblique lines and RCB is a
rotated board of eight cells. An axis-parallel tree needs a staircase of
cuts for every slanted boundary while an oblique tree can follow it.
"""

import time

from oc1 import SearchParams, induce, partition
from oc1.datagen import gen_pol, gen_rcb, pol_true_tree, rcb_true_tree

for name, gen, truth in (("POL", gen_pol, pol_true_tree()), ("RCB", gen_rcb, rcb_true_tree())):
    ds = gen(2000, seed=7)
    train, test = partition(ds, [0.8, 0.2], seed=1)
    print(f"{name}: the generating tree has {truth.leaf_count} leaves and {100 * truth.accuracy(ds):.0f}% accuracy")
    for label, params in (
        ("axis-parallel", SearchParams(axis_parallel_only=True)),
        ("oblique 0:0", SearchParams(restarts=0, max_jumps=0)),
        ("oblique 20:20", SearchParams(restarts=20, max_jumps=20)),
    ):
        t0 = time.perf_counter()
        tree = induce(train, params)
        secs = time.perf_counter() - t0
        print(
            f"  {label:<14} {tree.leaf_count:>4} leaves, depth {tree.depth():>2}, "
            f"test accuracy {100 * tree.accuracy(test):5.1f}%, {tree.evals:>6} hyperplanes, {secs:.1f}s"
        )
