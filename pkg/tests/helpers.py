"""Independent reference computations shared by the test modules."""

import itertools
import math

import numpy as np

from oc1.dataset import from_arrays
from oc1.impurity import SplitCounts, get_measure


def split_impurity(y, above, k, measure):
    up = np.bincount(y[above], minlength=k)
    down = np.bincount(y, minlength=k) - up
    return get_measure(measure)(SplitCounts(down, up))


def brute_axis_impurity(ds, measure):
    """Minimum impurity over every midpoint threshold of every attribute (plain loops)."""
    best = None
    for i in range(ds.d):
        values = sorted(set(ds.X[:, i].tolist()))
        for lo, hi in zip(values, values[1:]):
            imp = split_impurity(ds.y, ds.X[:, i] > (lo + hi) / 2, ds.k, measure)
            best = imp if best is None else min(best, imp)
    return best


def staircase(m=6, delta=1.5):
    """Two interleaved diagonal rows: class 1 at (i, i + delta), class 0 at (i + delta, i).

    The classes are separated by the line x2 = x1, but every single-coefficient
    move from an axis-parallel start gets stuck.
    """
    pts, labels = [], []
    for i in range(m):
        pts.append((i, i + delta))
        labels.append(1)
        pts.append((i + delta, i))
        labels.append(0)
    return from_arrays(np.array(pts, dtype=float), labels)


def pair_line_optimum(ds, measure, eps=1e-6):
    """Global optimum of a 2-D split by enumerating lines through point pairs.

    Each line through two points is tilted by +-eps about either point or
    their midpoint and shifted by +-eps, which realises every way of putting
    the two defining points on either side. Every linear dichotomy of points
    in general position arises this way.
    """
    X, y = ds.X, ds.y
    best = split_impurity(y, np.zeros(ds.n, bool), ds.k, measure)
    for p, q in itertools.combinations(range(ds.n), 2):
        P, Q = X[p], X[q]
        if np.array_equal(P, Q):
            continue
        direction = (Q - P) / np.linalg.norm(Q - P)
        base = math.atan2(direction[1], direction[0])
        for pivot in (P, Q, (P + Q) / 2):
            for tilt in (-eps, 0.0, eps):
                t = base + tilt
                normal = np.array([-math.sin(t), math.cos(t)])
                V = (X - pivot) @ normal
                for shift in (-eps * 1e-3, 0.0, eps * 1e-3):
                    imp = split_impurity(y, V + shift > 0, ds.k, measure)
                    best = min(best, imp)
    return best
