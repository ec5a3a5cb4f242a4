"""Synthetic benchmark data: LS10, parallel oblique lines (POL), rotated checkerboard (RCB).

POL and RCB geometry constants are our own choices (the concept classes are
fixed, the exact layouts are not) and can be overridden.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .dataset import Dataset, from_arrays
from .impurity import SplitCounts
from .split_search import Hyperplane, SplitCandidate
from .tree import DecisionTree, Node

POL_OFFSETS = (-0.6, -0.2, 0.2, 0.6)
RCB_ANGLE = -45.0
RCB_GRID = (4, 2)


@dataclass(frozen=True)
class GenSpec:
    kind: str
    n: int
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in GENERATORS:
            raise ValueError(f"unknown generator {self.kind!r}")
        if self.n < 1:
            raise ValueError("n must be positive")

    def header(self) -> list[str]:
        extra = " ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return [f"generator kind={self.kind} n={self.n} seed={self.seed} {extra}".rstrip()]


def _uniform(n, d, seed):
    return np.random.default_rng(seed).uniform(0.0, 1.0, size=(n, d))


def ls10_labels(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    return (X[:, :5].sum(axis=1) < X[:, 5:10].sum(axis=1)).astype(np.int64)


def gen_ls10(n: int = 2000, seed: int = 0) -> Dataset:
    """10 uniform attributes; class 1 iff ``x1+..+x5 < x6+..+x10``."""
    X = _uniform(n, 10, seed)
    return from_arrays(X, ls10_labels(X), classes=[0, 1])


def pol_regions(X, offsets: Sequence[float] = POL_OFFSETS) -> np.ndarray:
    """Number of lines ``x2 = x1 + c`` the point lies strictly above."""
    X = np.asarray(X, dtype=float)
    gap = X[:, 1] - X[:, 0]
    return (gap[:, None] > np.asarray(offsets)[None, :]).sum(axis=1)


def gen_pol(n: int = 2000, seed: int = 0, offsets: Sequence[float] = POL_OFFSETS) -> Dataset:
    """Four parallel oblique lines cut the unit square into five strips of alternating class."""
    X = _uniform(n, 2, seed)
    return from_arrays(X, pol_regions(X, offsets) % 2, classes=[0, 1])


def _rotate(X, angle_deg, center=(0.5, 0.5)):
    t = math.radians(angle_deg)
    c, s = math.cos(t), math.sin(t)
    P = np.asarray(X, dtype=float) - center
    u = c * P[:, 0] - s * P[:, 1]
    v = s * P[:, 0] + c * P[:, 1]
    return u + center[0], v + center[1]


def _rcb_box(angle_deg):
    corners = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
    u, v = _rotate(corners, angle_deg)
    return (u.min(), u.max()), (v.min(), v.max())


def rcb_cells(X, angle: float = RCB_ANGLE, grid: tuple = RCB_GRID) -> np.ndarray:
    """Cell index ``iu * grid[1] + iv`` on a grid over the rotated unit square's bounding box."""
    (u0, u1), (v0, v1) = _rcb_box(angle)
    u, v = _rotate(X, angle)
    nu, nv = grid
    iu = np.clip(np.floor((u - u0) / (u1 - u0) * nu), 0, nu - 1).astype(np.int64)
    iv = np.clip(np.floor((v - v0) / (v1 - v0) * nv), 0, nv - 1).astype(np.int64)
    return iu * nv + iv


def gen_rcb(n: int = 2000, seed: int = 0, angle: float = RCB_ANGLE, grid: tuple = RCB_GRID) -> Dataset:
    """Rotated checkerboard: each cell of a 4x2 grid in a frame rotated by ``angle`` is its own class."""
    X = _uniform(n, 2, seed)
    return from_arrays(X, rcb_cells(X, angle, grid), classes=np.arange(grid[0] * grid[1]))


def gen_linear(n: int, d: int, plane, seed: int = 0) -> Dataset:
    """Uniform points in ``[0,1]^d`` labelled 1 above ``plane`` and 0 below."""
    plane = plane if isinstance(plane, Hyperplane) else Hyperplane(plane)
    if plane.d != d:
        raise ValueError("plane dimension does not match d")
    X = _uniform(n, d, seed)
    return from_arrays(X, plane.above(X).astype(np.int64), classes=[0, 1])


GENERATORS = {"ls10": gen_ls10, "pol": gen_pol, "rcb": gen_rcb, "linear": gen_linear}


def generate(spec: GenSpec) -> Dataset:
    fn = GENERATORS[spec.kind]
    ds = fn(n=spec.n, seed=spec.seed, **spec.params)
    return replace(ds, header=tuple(spec.header()))


# -- hand-built reference trees ------------------------------------------------------------


def _leaf(k, label):
    counts = np.zeros(k, dtype=np.int64)
    counts[label] = 1
    return Node(counts)


def _internal(coef, below: Node, above: Node):
    counts = below.counts + above.counts
    split = SplitCandidate(Hyperplane(coef), math.nan, SplitCounts(below.counts, above.counts))
    return Node(counts, split, below, above)


def pol_true_tree(offsets: Sequence[float] = POL_OFFSETS) -> DecisionTree:
    """Five-leaf chain of the generating lines: region r lies above lines 0..r-1."""
    offsets = sorted(offsets)
    node = _leaf(2, len(offsets) % 2)
    for r in range(len(offsets) - 1, -1, -1):
        # above line r -> continue up the chain; below -> region r
        node = _internal([-1.0, 1.0, -offsets[r]], _leaf(2, r % 2), node)
    return DecisionTree(node, 2, 2, np.array([0, 1]))


def rcb_true_tree(angle: float = RCB_ANGLE, grid: tuple = RCB_GRID) -> DecisionTree:
    """Grid tree in the rotated frame: one cut on v, then ``nu - 1`` cuts on u per half."""
    (u0, u1), (v0, v1) = _rcb_box(angle)
    nu, nv = grid
    t = math.radians(angle)
    c, s = math.cos(t), math.sin(t)
    k = nu * nv

    # u = c*(x-.5) - s*(y-.5) + .5 ; v = s*(x-.5) + c*(y-.5) + .5
    def u_plane(b):
        return [c, -s, 0.5 - 0.5 * c + 0.5 * s - b]

    def v_plane(b):
        return [s, c, 0.5 - 0.5 * s - 0.5 * c - b]

    def u_chain(iv, lo, hi):
        if hi - lo == 1:
            return _leaf(k, lo * nv + iv)
        mid = (lo + hi) // 2
        b = u0 + (u1 - u0) * mid / nu
        return _internal(u_plane(b), u_chain(iv, lo, mid), u_chain(iv, mid, hi))

    def v_chain(lo, hi):
        if hi - lo == 1:
            return u_chain(lo, 0, nu)
        mid = (lo + hi) // 2
        b = v0 + (v1 - v0) * mid / nv
        return _internal(v_plane(b), v_chain(lo, mid), v_chain(mid, hi))

    return DecisionTree(v_chain(0, nv), 2, k, np.arange(k))
