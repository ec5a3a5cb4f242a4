"""Labelled numeric datasets: text I/O, mean imputation and random partitioning."""

from __future__ import annotations

import math
from importlib import resources
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

MISSING = "?"


class DataFormatError(ValueError):
    """Raised for malformed dataset files."""


@dataclass(frozen=True, eq=False)
class Dataset:
    """``n`` examples with ``d`` numeric attributes and dense labels in ``0..k-1``.

    ``X`` may contain NaN for missing cells until :meth:`impute` is applied.
    ``classes[c]`` is the raw label that dense label ``c`` stands for.
    """

    X: np.ndarray
    y: np.ndarray
    classes: np.ndarray
    attribute_means: Optional[np.ndarray] = None
    header: tuple = field(default=())

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=np.int64)
        if X.ndim != 2:
            raise ValueError("X must be two-dimensional")
        if y.shape != (X.shape[0],):
            raise ValueError("y must have one label per row of X")
        classes = np.asarray(self.classes, dtype=np.int64)
        if y.size and (y.min() < 0 or y.max() >= classes.size):
            raise ValueError("labels must lie in 0..k-1")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "classes", classes)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    @property
    def k(self) -> int:
        return self.classes.size

    def __len__(self):
        return self.n

    def example(self, j: int):
        return self.X[j], int(self.y[j])

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.y, minlength=self.k)

    def has_missing(self) -> bool:
        return bool(np.isnan(self.X).any())

    def subset(self, idx) -> "Dataset":
        return replace(self, X=self.X[idx], y=self.y[idx])

    def impute(self, means: Optional[np.ndarray] = None) -> "Dataset":
        """Fill missing cells with per-attribute means.

        Means are computed from this dataset unless ``means`` is given
        (e.g. training-fold means applied to a test fold).
        """
        if means is None:
            means = attribute_means(self.X)
        means = np.asarray(means, dtype=float)
        X = self.X
        if np.isnan(X).any():
            X = np.where(np.isnan(X), means, X)
        return replace(self, X=X, attribute_means=means)

    def raw_labels(self) -> np.ndarray:
        return self.classes[self.y]


def attribute_means(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    observed = ~np.isnan(X)
    counts = observed.sum(axis=0)
    if X.shape[0] and (counts == 0).any():
        bad = [int(i) + 1 for i in np.flatnonzero(counts == 0)]
        raise ValueError(f"attribute(s) {bad} have no observed values; mean undefined")
    sums = np.where(observed, X, 0.0).sum(axis=0)
    return sums / np.maximum(counts, 1)


def impute_missing(ds: Dataset, means=None) -> Dataset:
    return ds.impute(means)


def from_arrays(X, labels, classes=None) -> Dataset:
    """Build a dataset from raw (arbitrary integer) labels, remapping them to 0..k-1."""
    labels = np.asarray(labels, dtype=np.int64)
    if classes is None:
        classes = np.unique(labels)
    classes = np.asarray(classes, dtype=np.int64)
    if not np.isin(labels, classes).all():
        raise ValueError("labels not covered by the supplied class list")
    y = np.searchsorted(classes, labels)
    return Dataset(np.asarray(X, dtype=float).reshape(labels.size, -1), y, classes)


def parse_lines(lines: Iterable[str], missing: str = MISSING, source: str = "<data>") -> Dataset:
    rows, labels, header = [], [], []
    d = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            header.append(line[1:].strip())
            continue
        fields = line.split()
        if len(fields) < 2:
            raise DataFormatError(f"{source}:{lineno}: expected attributes followed by a label")
        if d is None:
            d = len(fields) - 1
        elif len(fields) - 1 != d:
            raise DataFormatError(
                f"{source}:{lineno}: expected {d} attributes, found {len(fields) - 1}"
            )
        row = []
        for f in fields[:-1]:
            if f == missing:
                row.append(math.nan)
                continue
            try:
                v = float(f)
            except ValueError:
                raise DataFormatError(f"{source}:{lineno}: non-numeric field {f!r}") from None
            if not math.isfinite(v):
                raise DataFormatError(f"{source}:{lineno}: non-finite field {f!r}")
            row.append(v)
        try:
            labels.append(int(fields[-1]))
        except ValueError:
            raise DataFormatError(f"{source}:{lineno}: label {fields[-1]!r} is not an integer") from None
        rows.append(row)
    if not rows:
        raise DataFormatError(f"{source}: no examples found")
    ds = from_arrays(np.array(rows, dtype=float), labels)
    return replace(ds, header=tuple(header))


def load(path, missing: str = MISSING) -> Dataset:
    """Read a whitespace-separated labelled-rows file (last column is the integer label)."""
    path = Path(path)
    with path.open() as fh:
        return parse_lines(fh, missing=missing, source=str(path))


def format_rows(ds: Dataset, missing: str = MISSING, header: Sequence[str] = ()) -> str:
    out = [f"# {h}" for h in header]
    raw = ds.raw_labels()
    for x, label in zip(ds.X, raw):
        cells = [missing if math.isnan(v) else f"{v:.17g}" for v in x]
        out.append(" ".join(cells + [str(int(label))]))
    return "\n".join(out) + "\n"


def save(ds: Dataset, path, missing: str = MISSING, header: Sequence[str] = ()) -> None:
    Path(path).write_text(format_rows(ds, missing=missing, header=header or ds.header))


def split_sizes(n: int, fractions: Sequence[float]) -> list[int]:
    fractions = np.asarray(fractions, dtype=float)
    if fractions.size == 0 or (fractions <= 0).any():
        raise ValueError("fractions must be positive")
    if abs(fractions.sum() - 1.0) > 1e-9:
        raise ValueError("fractions must sum to 1")
    if fractions.size > n:
        raise ValueError(f"cannot split {n} examples into {fractions.size} parts")
    bounds = np.rint(np.cumsum(fractions) * n).astype(int)
    bounds[-1] = n
    sizes = np.diff(np.concatenate([[0], bounds])).tolist()
    return sizes


def partition_indices(n: int, fractions: Sequence[float], seed) -> list[np.ndarray]:
    sizes = split_sizes(n, fractions)
    perm = np.random.default_rng(seed).permutation(n)
    cuts = np.cumsum(sizes)[:-1]
    return [np.sort(part) for part in np.split(perm, cuts)]


def partition(ds: Dataset, fractions: Sequence[float], seed) -> list[Dataset]:
    """Randomly split into disjoint parts of size ``round(n * fraction)`` (cumulatively rounded)."""
    return [ds.subset(idx) for idx in partition_indices(ds.n, fractions, seed)]


def load_iris() -> Dataset:
    """Fisher's iris data (150 x 4, three classes), bundled with the package."""
    with resources.files("oc1").joinpath("data/iris.data").open() as fh:
        return parse_lines(fh, source="iris.data")
