"""Impurity measures over left/right class-count histograms.

Every measure is written against batched count arrays of shape ``(..., k)``
so that a 1-D split sweep can score all candidate positions in one call.
The scalar helpers (:func:`twoing`, :func:`gini`, ...) wrap the batched
kernels for single splits.

Lower is always better. Goodness measures (twoing, information gain) are
turned into impurities by taking the reciprocal, with ``inf`` standing in
for zero goodness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

MEASURES = (
    "twoing",
    "info-gain",
    "gini",
    "max-minority",
    "sum-minority",
    "sum-of-variances",
)


@dataclass(frozen=True)
class SplitCounts:
    """Per-class counts on the two sides of a split (left = below, right = above)."""

    left: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        left = np.asarray(self.left, dtype=np.int64)
        right = np.asarray(self.right, dtype=np.int64)
        if left.shape != right.shape or left.ndim != 1:
            raise ValueError("left and right must be 1-D count vectors of equal length")
        if (left < 0).any() or (right < 0).any():
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @property
    def n_left(self) -> int:
        return int(self.left.sum())

    @property
    def n_right(self) -> int:
        return int(self.right.sum())

    @property
    def n(self) -> int:
        return self.n_left + self.n_right

    def swapped(self) -> "SplitCounts":
        return SplitCounts(self.right, self.left)


def _is_pure(counts):
    # a side is pure when at most one category is present; empty counts as pure
    return np.count_nonzero(counts, axis=-1) <= 1


def homogeneous_mask(left, right):
    """Batched shortcut test: True where every nonempty side holds a single category."""
    return _is_pure(left) & _is_pure(right)


def homogeneous_shortcut(c: SplitCounts) -> Optional[float]:
    """Return 0.0 if each nonempty side is pure, otherwise None."""
    if c.n == 0:
        raise ValueError("cannot score a split of an empty node")
    return 0.0 if bool(homogeneous_mask(c.left, c.right)) else None


def _safe_div(num, den):
    # x / 0 -> 0
    num, den = np.broadcast_arrays(np.asarray(num, dtype=float), np.asarray(den, dtype=float))
    out = np.zeros(num.shape)
    np.divide(num, den, out=out, where=den > 0)
    return out


def _reciprocal(goodness):
    goodness = np.asarray(goodness, dtype=float)
    out = np.full(goodness.shape, np.inf)
    np.divide(1.0, goodness, out=out, where=goodness > 0)
    return out


def twoing_value(left, right):
    """Twoing goodness ``(|L|/n)(|R|/n)(sum_i |L_i/|L| - R_i/|R||)^2``."""
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    nl = left.sum(axis=-1)
    nr = right.sum(axis=-1)
    n = nl + nr
    pl = _safe_div(left, nl[..., None])
    pr = _safe_div(right, nr[..., None])
    diff = np.abs(pl - pr).sum(axis=-1)
    return (nl / n) * (nr / n) * diff**2


def _twoing(left, right):
    return _reciprocal(twoing_value(left, right))


def _entropy(counts):
    counts = np.asarray(counts, dtype=float)
    total = counts.sum(axis=-1, keepdims=True)
    p = _safe_div(counts, total)
    logp = np.zeros(p.shape)
    np.log2(p, out=logp, where=p > 0)
    return -(p * logp).sum(axis=-1)


def information_gain(left, right):
    """Shannon information gain in bits of splitting ``left + right``."""
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    nl = left.sum(axis=-1)
    nr = right.sum(axis=-1)
    n = nl + nr
    return _entropy(left + right) - (nl / n) * _entropy(left) - (nr / n) * _entropy(right)


_GAIN_TOL = 1e-12


def _info_gain(left, right):
    gain = information_gain(left, right)
    # entropy round-off leaves +-1e-17 where the gain is exactly zero
    return _reciprocal(np.where(np.abs(gain) <= _GAIN_TOL, 0.0, gain))


def _gini(left, right):
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    nl = left.sum(axis=-1)
    nr = right.sum(axis=-1)
    gl = np.where(nl > 0, 1.0 - (_safe_div(left, nl[..., None]) ** 2).sum(axis=-1), 0.0)
    gr = np.where(nr > 0, 1.0 - (_safe_div(right, nr[..., None]) ** 2).sum(axis=-1), 0.0)
    return (nl * gl + nr * gr) / (nl + nr)


def _minority(counts):
    # sum of all counts except the (first) largest one
    counts = np.asarray(counts)
    return counts.sum(axis=-1) - counts.max(axis=-1, initial=0)


def _max_minority(left, right):
    return np.maximum(_minority(left), _minority(right)).astype(float)


def _sum_minority(left, right):
    return (_minority(left) + _minority(right)).astype(float)


def frequency_ranks(totals) -> np.ndarray:
    """Rank categories 1..m by descending frequency (ties by index); absent ones get 0."""
    totals = np.asarray(totals)
    order = np.lexsort((np.arange(totals.shape[-1]), -totals))
    ranks = np.zeros(totals.shape[-1], dtype=float)
    present = order[totals[order] > 0]
    ranks[present] = np.arange(1, present.size + 1)
    return ranks


def _side_variance(counts, ranks):
    counts = np.asarray(counts, dtype=float)
    size = counts.sum(axis=-1)
    s1 = (counts * ranks).sum(axis=-1)
    s2 = (counts * ranks**2).sum(axis=-1)
    var = s2 - _safe_div(s1**2, size)
    return np.maximum(var, 0.0)


def _sum_of_variances(left, right):
    left = np.asarray(left)
    right = np.asarray(right)
    totals = left + right
    if totals.ndim == 1:
        ranks = frequency_ranks(totals)
    else:
        # the renumbering depends on the node's totals, shared by every candidate
        flat = totals.reshape(-1, totals.shape[-1])
        if not (flat == flat[:1]).all():
            ranks = np.stack([frequency_ranks(t) for t in flat]).reshape(totals.shape)
        else:
            ranks = frequency_ranks(flat[0])
    return _side_variance(left, ranks) + _side_variance(right, ranks)


_KERNELS: dict[str, Callable] = {
    "twoing": _twoing,
    "info-gain": _info_gain,
    "gini": _gini,
    "max-minority": _max_minority,
    "sum-minority": _sum_minority,
    "sum-of-variances": _sum_of_variances,
}


@dataclass(frozen=True)
class ImpurityMeasure:
    """A named impurity measure; call ``batch`` on stacked counts or the instance on one split."""

    kind: str = "twoing"

    def __post_init__(self):
        if self.kind not in _KERNELS:
            raise ValueError(f"unknown impurity measure {self.kind!r}; choose from {MEASURES}")

    def batch(self, left, right) -> np.ndarray:
        left = np.asarray(left)
        right = np.asarray(right)
        values = np.asarray(_KERNELS[self.kind](left, right), dtype=float)
        return np.where(homogeneous_mask(left, right), 0.0, values)

    def __call__(self, counts: SplitCounts) -> float:
        if counts.n == 0:
            raise ValueError("cannot score a split of an empty node")
        return float(self.batch(counts.left, counts.right))


def get_measure(measure) -> ImpurityMeasure:
    if isinstance(measure, ImpurityMeasure):
        return measure
    return ImpurityMeasure(str(measure).replace("_", "-"))


def twoing(c: SplitCounts) -> float:
    return ImpurityMeasure("twoing")(c)


def gini(c: SplitCounts) -> float:
    return ImpurityMeasure("gini")(c)


def info_gain(c: SplitCounts, parent=None) -> float:
    """Reciprocal information gain. ``parent`` must equal ``left + right`` when given."""
    if parent is not None and not np.array_equal(np.asarray(parent), c.left + c.right):
        raise ValueError("parent counts do not match left + right")
    return ImpurityMeasure("info-gain")(c)


def max_minority(c: SplitCounts) -> float:
    return ImpurityMeasure("max-minority")(c)


def sum_minority(c: SplitCounts) -> float:
    return ImpurityMeasure("sum-minority")(c)


def sum_of_variances(c: SplitCounts) -> float:
    return ImpurityMeasure("sum-of-variances")(c)
