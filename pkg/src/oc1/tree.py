"""Top-down induction of oblique decision trees, prediction and a text format for trees."""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field, fields, replace
from typing import Iterator, Optional

import numpy as np

from .dataset import Dataset
from .impurity import ImpurityMeasure, SplitCounts, get_measure
from .split_search import (
    RNG_ID,
    Hyperplane,
    SearchParams,
    SearchStats,
    SplitCandidate,
    find_split,
)

log = logging.getLogger(__name__)

FORMAT_HEADER = "OC1-TREE"
FORMAT_VERSION = 1


class TreeFormatError(ValueError):
    pass


@dataclass(eq=False)
class Node:
    """Leaf when ``split`` is None. ``left`` holds examples below the plane, ``right`` above."""

    counts: np.ndarray
    split: Optional[SplitCandidate] = None
    left: Optional["Node"] = None
    right: Optional["Node"] = None

    @property
    def is_leaf(self) -> bool:
        return self.split is None

    @property
    def label(self) -> int:
        # np.argmax returns the first maximum, i.e. ties go to the lowest index
        return int(np.argmax(self.counts))

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    def errors(self) -> int:
        """Training misclassifications if this node were a leaf."""
        return self.n - int(self.counts.max())

    def iter_nodes(self) -> Iterator["Node"]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            if not node.is_leaf:
                stack.append(node.right)
                stack.append(node.left)

    def leaves(self) -> int:
        return sum(1 for node in self.iter_nodes() if node.is_leaf)

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())


@dataclass(eq=False)
class DecisionTree:
    root: Node
    d: int
    k: int
    classes: np.ndarray
    attribute_means: Optional[np.ndarray] = None
    params: SearchParams = field(default_factory=SearchParams)
    measure: str = "twoing"
    rng_id: str = RNG_ID
    evals: int = 0
    node_log: list = field(default_factory=list, repr=False)

    @property
    def leaf_count(self) -> int:
        return self.root.leaves()

    @property
    def internal_count(self) -> int:
        return sum(1 for node in self.root.iter_nodes() if not node.is_leaf)

    def depth(self) -> int:
        return self.root.depth()

    def _prepare(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.d:
            raise ValueError(f"expected {self.d} attributes, got {X.shape[1]}")
        if np.isnan(X).any():
            if self.attribute_means is None:
                raise ValueError("missing values present but the tree has no stored means")
            X = np.where(np.isnan(X), self.attribute_means, X)
        return X

    def predict(self, X) -> np.ndarray:
        """Dense labels (0..k-1) for each row of ``X``."""
        X = self._prepare(X)
        out = np.empty(X.shape[0], dtype=np.int64)
        stack = [(self.root, np.arange(X.shape[0]))]
        while stack:
            node, idx = stack.pop()
            if idx.size == 0:
                continue
            if node.is_leaf:
                out[idx] = node.label
                continue
            above = node.split.plane.above(X[idx])
            stack.append((node.left, idx[~above]))
            stack.append((node.right, idx[above]))
        return out

    def predict_raw(self, X) -> np.ndarray:
        """Labels in the original (file) numbering."""
        return self.classes[self.predict(X)]

    def classify(self, x) -> int:
        return int(self.predict(np.atleast_2d(x))[0])

    def accuracy(self, ds: Dataset) -> float:
        return float(np.mean(self.predict(ds.X) == ds.y))

    def with_root(self, root: Node) -> "DecisionTree":
        return replace(self, root=root, node_log=[])


def classify(tree: DecisionTree, x) -> int:
    return tree.classify(x)


def max_depth_for(n: int) -> int:
    return 10 + math.ceil(math.log2(max(n, 1)))


def induce(
    T: Dataset,
    params: SearchParams = SearchParams(),
    measure="twoing",
    stats: Optional[SearchStats] = None,
) -> DecisionTree:
    """Grow a tree by recursive splitting until every node is homogeneous or unsplittable."""
    if T.n == 0:
        raise ValueError("cannot induce a tree from an empty dataset")
    measure = get_measure(measure)
    if T.has_missing() or T.attribute_means is None:
        T = T.impute(T.attribute_means)
    stats = stats if stats is not None else SearchStats()
    node_log = []
    limit = max_depth_for(T.n)
    hit_limit = False

    def grow(idx: np.ndarray, key: int, depth: int) -> Node:
        nonlocal hit_limit
        y = T.y[idx]
        counts = np.bincount(y, minlength=T.k)
        if np.count_nonzero(counts) <= 1:
            return Node(counts)
        if depth >= limit:
            hit_limit = True
            return Node(counts)
        sub = T.subset(idx)
        before = stats.evals
        split = find_split(sub, params, measure, node_key=key, stats=stats)
        node_log.append(
            {
                "key": key,
                "n": int(idx.size),
                "evals": stats.evals - before,
                "improvements": split.improvements if split is not None else (),
                "impurity": split.impurity if split is not None else math.nan,
                "oblique": bool(split is not None and split.oblique),
            }
        )
        if split is None or not split.separates():
            return Node(counts)
        above = split.plane.above(sub.X)
        return Node(
            counts,
            split,
            grow(idx[~above], 2 * key, depth + 1),
            grow(idx[above], 2 * key + 1, depth + 1),
        )

    root = grow(np.arange(T.n), 1, 0)
    if hit_limit:
        warnings.warn(f"depth limit {limit} reached; some impure leaves were forced", RuntimeWarning)
    return DecisionTree(
        root,
        T.d,
        T.k,
        T.classes,
        T.attribute_means,
        params,
        measure.kind,
        RNG_ID,
        stats.evals,
        node_log,
    )


# -- serialization -------------------------------------------------------------------------


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _csv(values, fmt=str) -> str:
    return ",".join(fmt(v) for v in values)


def serialize(tree: DecisionTree) -> str:
    """Line-oriented text form; nodes are listed in pre-order (node, below, above)."""
    lines = [
        f"{FORMAT_HEADER} {FORMAT_VERSION}",
        f"d {tree.d}",
        f"k {tree.k}",
        "classes " + " ".join(str(int(c)) for c in tree.classes),
        "means " + ("none" if tree.attribute_means is None else " ".join(_fmt(m) for m in tree.attribute_means)),
        f"measure {tree.measure}",
        f"rng {tree.rng_id}",
        "params " + " ".join(f"{f.name}={getattr(tree.params, f.name)}" for f in fields(SearchParams)),
        f"nodes {sum(1 for _ in tree.root.iter_nodes())}",
    ]
    for node in tree.root.iter_nodes():
        counts = "counts=" + _csv(node.counts.tolist())
        if node.is_leaf:
            lines.append(f"L {counts}")
            continue
        split = node.split
        axis = "-" if split.axis is None else str(split.axis[0])
        lines.append(
            f"I {counts} coef={_csv(split.plane.coefficients.tolist(), _fmt)} "
            f"impurity={_fmt(split.impurity)} axis={axis}"
        )
    return "\n".join(lines) + "\n"


def _parse_params(tokens) -> SearchParams:
    kinds = {f.name: f.type for f in fields(SearchParams)}
    kwargs = {}
    for tok in tokens:
        name, _, value = tok.partition("=")
        if name not in kinds:
            raise TreeFormatError(f"unknown search parameter {name!r}")
        default = getattr(SearchParams(), name)
        if isinstance(default, bool):
            kwargs[name] = value == "True"
        elif isinstance(default, int):
            kwargs[name] = int(value)
        elif isinstance(default, float):
            kwargs[name] = float(value)
        else:
            kwargs[name] = value
    return SearchParams(**kwargs)


def deserialize(text: str) -> DecisionTree:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise TreeFormatError("empty tree file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != FORMAT_HEADER:
        raise TreeFormatError("missing OC1-TREE header")
    if head[1] != str(FORMAT_VERSION):
        raise TreeFormatError(f"unsupported tree format version {head[1]} (expected {FORMAT_VERSION})")
    meta = {}
    pos = 1
    while pos < len(lines) and lines[pos].split()[0] not in ("I", "L"):
        key, *rest = lines[pos].split()
        meta[key] = rest
        pos += 1
    try:
        d = int(meta["d"][0])
        k = int(meta["k"][0])
        classes = np.array([int(c) for c in meta["classes"]], dtype=np.int64)
        means = None if meta["means"] == ["none"] else np.array([float(v) for v in meta["means"]])
        measure = meta["measure"][0]
        rng_id = meta["rng"][0]
        params = _parse_params(meta.get("params", []))
        n_nodes = int(meta["nodes"][0])
    except (KeyError, IndexError, ValueError) as exc:
        raise TreeFormatError(f"malformed tree header: {exc}") from None
    records = lines[pos:]
    if len(records) != n_nodes:
        raise TreeFormatError(f"expected {n_nodes} node records, found {len(records)}")
    get_measure(measure)
    it = iter(enumerate(records, start=pos + 1))

    def parse_node() -> Node:
        try:
            lineno, rec = next(it)
        except StopIteration:
            raise TreeFormatError("truncated node list") from None
        kind, *tokens = rec.split()
        kv = dict(t.partition("=")[::2] for t in tokens)
        try:
            counts = np.array([int(c) for c in kv["counts"].split(",")], dtype=np.int64)
            if counts.size != k:
                raise ValueError(f"expected {k} counts")
            if kind == "L":
                return Node(counts)
            if kind != "I":
                raise ValueError(f"unknown node kind {kind!r}")
            coef = np.array([float(v) for v in kv["coef"].split(",")])
            if coef.size != d + 1:
                raise ValueError(f"expected {d + 1} coefficients")
            impurity = float(kv["impurity"])
            axis = None if kv["axis"] == "-" else (int(kv["axis"]), -float(coef[-1]))
        except (KeyError, ValueError) as exc:
            raise TreeFormatError(f"line {lineno}: malformed node record: {exc}") from None
        left = parse_node()
        right = parse_node()
        split = SplitCandidate(Hyperplane(coef), impurity, SplitCounts(left.counts, right.counts), axis=axis)
        return Node(counts, split, left, right)

    root = parse_node()
    return DecisionTree(root, d, k, classes, means, params, measure, rng_id)


def save_tree(tree: DecisionTree, path) -> None:
    with open(path, "w") as fh:
        fh.write(serialize(tree))


def load_tree(path) -> DecisionTree:
    with open(path) as fh:
        return deserialize(fh.read())
