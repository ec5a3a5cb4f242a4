"""
Scoring a split
===============

A split sends each training example to one of two sides. An impurity
measure looks only at the class histogram on each side and returns a number
that is 0 when both sides are pure and larger the more mixed they are.
"""

import numpy as np

from oc1.impurity import MEASURES, ImpurityMeasure, SplitCounts

# Three splits of a 20-example, two-class node: a perfect one, a decent one
# and a useless one that keeps the class ratio on both sides.
splits = {
    "perfect": SplitCounts(np.array([10, 0]), np.array([0, 10])),
    "decent": SplitCounts(np.array([8, 2]), np.array([2, 8])),
    "useless": SplitCounts(np.array([5, 5]), np.array([5, 5])),
}

print(f"{'measure':<18}" + "".join(f"{name:>10}" for name in splits))
for kind in MEASURES:
    m = ImpurityMeasure(kind)
    print(f"{kind:<18}" + "".join(f"{m(c):>10.4g}" for c in splits.values()))

# Twoing and information gain are goodness scores, so they are reported as
# reciprocals. A split with no goodness at all comes out as infinity.

# Sum minority just counts misclassified examples, which makes it blind in
# some cases. Here 50 examples of class 0 are followed by 24 of class 1 and
# then 26 of class 0 along a single attribute.
y = np.array([0] * 50 + [1] * 24 + [0] * 26)
total = np.bincount(y)
sum_minority = ImpurityMeasure("sum-minority")
twoing = ImpurityMeasure("twoing")
scores = []
for t in range(1, 100):
    left = np.bincount(y[:t], minlength=2)
    c = SplitCounts(left, total - left)
    scores.append((t, sum_minority(c), twoing(c)))

print("\ndistinct sum-minority scores over all 99 thresholds:", sorted({s for _, s, _ in scores}))
best = min(scores, key=lambda s: s[2])
print(f"twoing prefers the cut after example {best[0]} (impurity {best[2]:.3f})")
