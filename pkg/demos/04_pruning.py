"""
Pruning an overgrown tree
=========================

Trees are grown until every leaf is pure, so label noise makes them too big.
Weakest-link pruning builds a nested sequence of smaller trees and a held-out
pruning set picks one.
"""

from dataclasses import replace

import numpy as np

from oc1 import PruneParams, SearchParams, induce, partition, train_with_pruning
from oc1.datagen import gen_linear
from oc1.pruning import score_sequence, select_index, weakest_link_sequence

# A linear concept with 10% of the labels flipped.
ds = gen_linear(600, 2, [1.0, -1.0, 0.1], seed=3)
rng = np.random.default_rng(3)
flip = rng.random(ds.n) < 0.1
noisy = replace(ds, y=np.where(flip, 1 - ds.y, ds.y))

grow, prune, test = partition(noisy, [0.6, 0.2, 0.2], seed=0)
tree = induce(grow, SearchParams(restarts=5, max_jumps=5))
seq = score_sequence(weakest_link_sequence(tree), prune)

print(f"{'step':>4} {'alpha':>8} {'leaves':>7} {'prune acc':>10}")
for i, s in enumerate(seq):
    print(f"{i:>4} {s.alpha:>8.3f} {s.leaf_count:>7} {100 * s.accuracy:>9.1f}%")

# The 0-SE rule takes the most accurate tree on the pruning set. Larger k
# accepts smaller trees whose accuracy is within k * SE^2 of the best.
for k in (0, 1, 50):
    i = select_index(seq, k, prune.n)
    print(f"k={k:<3} picks step {i}: {seq[i].leaf_count} leaves, test accuracy {100 * seq[i].tree.accuracy(test):.1f}%")

# train_with_pruning does the same in one call, holding back 10% of its input.
pruned = train_with_pruning(noisy, SearchParams(restarts=5, max_jumps=5), PruneParams(seed=1))
print(f"\nunpruned {tree.leaf_count} leaves; train_with_pruning kept {pruned.leaf_count}")
