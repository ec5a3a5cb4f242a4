"""Cost-complexity (weakest link) pruning with a held-out pruning set."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dataset import Dataset, partition
from .split_search import SearchParams, SearchStats
from .tree import DecisionTree, Node, induce

# Power applied to the binomial standard error in the k-SE rule. The selection
# threshold is ``best - se_factor * SE**SE_POWER``; set to 1 for the customary
# k*SE rule.
SE_POWER = 2

_G_TOL = 1e-12


@dataclass(frozen=True)
class PruneParams:
    se_factor: float = 0.0
    prune_fraction: float = 0.10
    seed: int = 0

    def __post_init__(self):
        if self.se_factor < 0:
            raise ValueError("se_factor must be non-negative")
        if not 0.0 <= self.prune_fraction < 1.0:
            raise ValueError("prune_fraction must lie in [0, 1)")

    @property
    def enabled(self) -> bool:
        return self.prune_fraction > 0


@dataclass(frozen=True, eq=False)
class PruneStep:
    tree: DecisionTree
    alpha: float
    leaf_count: int
    accuracy: Optional[float] = None


def _subtree_stats(node: Node, out: dict) -> tuple[int, int]:
    """Fill ``out[id(node)] = g(node)`` for internal nodes; return (leaf errors, leaves)."""
    if node.is_leaf:
        return node.errors(), 1
    el, nl = _subtree_stats(node.left, out)
    er, nr = _subtree_stats(node.right, out)
    err, leaves = el + er, nl + nr
    out[id(node)] = (node.errors() - err) / (leaves - 1)
    return err, leaves


def _collapse(node: Node, targets: set) -> Node:
    if node.is_leaf:
        return node
    if id(node) in targets:
        return Node(node.counts)
    return Node(node.counts, node.split, _collapse(node.left, targets), _collapse(node.right, targets))


def weakest_link_sequence(tree: DecisionTree) -> list[PruneStep]:
    """Nested sequence of subtrees from the full tree down to the root leaf.

    At each step every internal node whose ``g = (R(t) - R(T_t)) / (leaves(T_t) - 1)``
    attains the minimum is collapsed; ``R`` counts training errors recorded
    in the node histograms.
    """
    if tree.root.is_leaf:
        raise ValueError("tree has no internal nodes to prune")
    seq = [PruneStep(tree, 0.0, tree.leaf_count)]
    root = tree.root
    alpha = 0.0
    while not root.is_leaf:
        g = {}
        _subtree_stats(root, g)
        g_min = min(g.values())
        targets = {key for key, val in g.items() if val <= g_min + _G_TOL}
        alpha = max(alpha, g_min)
        root = _collapse(root, targets)
        pruned = tree.with_root(root)
        seq.append(PruneStep(pruned, alpha, pruned.leaf_count))
    return seq


def score_sequence(seq: list[PruneStep], prune_set: Dataset) -> list[PruneStep]:
    return [PruneStep(s.tree, s.alpha, s.leaf_count, s.tree.accuracy(prune_set)) for s in seq]


def selection_threshold(best: float, n_prune: int, se_factor: float) -> float:
    se = math.sqrt(best * (1.0 - best) / n_prune)
    return best - se_factor * se**SE_POWER


def select_pruned(seq: list[PruneStep], params: PruneParams = PruneParams(), n_prune: Optional[int] = None) -> DecisionTree:
    """Smallest tree whose pruning-set accuracy is within the k-SE allowance of the best."""
    return seq[select_index(seq, params.se_factor, n_prune)].tree


def select_index(seq: list[PruneStep], se_factor: float, n_prune: Optional[int]) -> int:
    if not seq:
        raise ValueError("empty pruning sequence")
    acc = [s.accuracy for s in seq]
    if any(a is None for a in acc):
        raise ValueError("every sequence entry needs a pruning-set accuracy")
    best = max(acc)
    if se_factor > 0:
        if not n_prune:
            raise ValueError("n_prune is required when se_factor > 0")
        threshold = selection_threshold(best, n_prune, se_factor)
    else:
        threshold = best
    chosen = None
    for i, s in enumerate(seq):
        if s.accuracy >= threshold - 1e-12:
            if chosen is None or s.leaf_count < seq[chosen].leaf_count:
                chosen = i
    return chosen


def train_with_pruning(
    T: Dataset,
    search_params: SearchParams = SearchParams(),
    prune_params: PruneParams = PruneParams(),
    measure="twoing",
    stats: Optional[SearchStats] = None,
) -> DecisionTree:
    """Grow on a random ``1 - prune_fraction`` share of ``T`` and prune against the rest."""
    if not prune_params.enabled:
        return induce(T, search_params, measure, stats)
    if prune_params.prune_fraction * T.n < 1:
        raise ValueError(f"pruning set would be empty ({prune_params.prune_fraction} x {T.n} < 1)")
    grow_set, prune_set = partition(T, [1.0 - prune_params.prune_fraction, prune_params.prune_fraction], prune_params.seed)
    tree = induce(grow_set, search_params, measure, stats)
    if tree.root.is_leaf:
        return tree
    seq = score_sequence(weakest_link_sequence(tree), prune_set)
    chosen = select_pruned(seq, prune_params, prune_set.n)
    chosen.evals = tree.evals
    chosen.node_log = tree.node_log
    return chosen
