"""Repeated k-fold cross-validation reporting accuracy, leaf count and search effort."""

from __future__ import annotations

from concurrent.futures import Executor
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

import numpy as np

from .dataset import Dataset, partition_indices
from .pruning import PruneParams, train_with_pruning
from .split_search import RNG_ID, SearchParams, SearchStats
from .tree import DecisionTree


@dataclass
class CvReport:
    folds: int
    repeats: int
    per_run_accuracy: list
    per_run_leaves: list
    mean_accuracy: float
    sd_accuracy: float
    mean_leaves: float
    sd_leaves: float
    mean_evals: float
    config: dict = field(default_factory=dict)
    fold_results: list = field(default_factory=list, repr=False)


@dataclass(frozen=True)
class FoldResult:
    repeat: int
    fold: int
    correct: int
    tested: int
    leaves: int
    evals: int
    node_log: tuple = ()


def confusion_and_accuracy(tree: DecisionTree, test: Dataset):
    """Return ``(matrix, accuracy)``; ``matrix[i, j]`` counts true class i predicted as j."""
    if test.n == 0:
        raise ValueError("empty test set")
    pred = tree.predict(test.X)
    k = max(tree.k, test.k)
    matrix = np.zeros((k, k), dtype=np.int64)
    np.add.at(matrix, (test.y, pred), 1)
    return matrix, float(np.trace(matrix) / test.n)


def fold_seed(seed: int, repeat: int, fold: int = -1) -> np.random.SeedSequence:
    key = (repeat,) if fold < 0 else (repeat, fold)
    return np.random.SeedSequence(seed, spawn_key=key)


def _derive_int(ss: np.random.SeedSequence) -> int:
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def run_fold(ds: Dataset, train_idx, test_idx, repeat, fold, seed, search_params, prune_params, measure) -> FoldResult:
    train = ds.subset(train_idx).impute()
    test = ds.subset(test_idx).impute(train.attribute_means)
    sub_seed = _derive_int(fold_seed(seed, repeat, fold))
    sp = replace(search_params, seed=sub_seed)
    pp = replace(prune_params, seed=sub_seed)
    stats = SearchStats()
    tree = train_with_pruning(train, sp, pp, measure, stats)
    correct = int(np.sum(tree.predict(test.X) == test.y))
    log = tuple((rec["n"], tuple(rec["improvements"])) for rec in tree.node_log)
    return FoldResult(repeat, fold, correct, test.n, tree.leaf_count, tree.evals, log)


def _fold_jobs(ds: Dataset, folds: int, repeats: int, seed: int):
    jobs = []
    for r in range(repeats):
        parts = partition_indices(ds.n, [1.0 / folds] * folds, fold_seed(seed, r))
        for f, test_idx in enumerate(parts):
            train_idx = np.sort(np.concatenate([p for i, p in enumerate(parts) if i != f]))
            jobs.append((train_idx, test_idx, r, f))
    return jobs


def k_fold_cv(
    ds: Dataset,
    folds: int = 5,
    repeats: int = 10,
    seed: int = 0,
    search_params: SearchParams = SearchParams(),
    prune_params: PruneParams = PruneParams(),
    measure="twoing",
    executor: Optional[Executor] = None,
) -> CvReport:
    """Repeat ``folds``-fold cross-validation ``repeats`` times with fresh partitions.

    Per repeat, accuracy is total correct over all folds divided by ``n`` and
    size is the mean leaf count of the fold trees. Means and (population)
    standard deviations are taken over repeats. Imputation means come from
    each training portion. Results do not depend on whether an ``executor``
    is used.
    """
    if folds < 2:
        raise ValueError("need at least two folds")
    if ds.n < folds:
        raise ValueError(f"cannot make {folds} folds from {ds.n} examples")
    if repeats < 1:
        raise ValueError("repeats must be positive")
    jobs = _fold_jobs(ds, folds, repeats, seed)
    args = [(ds, tr, te, r, f, seed, search_params, prune_params, measure) for tr, te, r, f in jobs]
    if executor is None:
        results = [run_fold(*a) for a in args]
    else:
        results = list(executor.map(run_fold, *zip(*args)))
    results.sort(key=lambda res: (res.repeat, res.fold))

    acc, leaves = [], []
    for r in range(repeats):
        mine = [res for res in results if res.repeat == r]
        acc.append(sum(res.correct for res in mine) / sum(res.tested for res in mine))
        leaves.append(float(np.mean([res.leaves for res in mine])))
    config = {
        "folds": folds,
        "repeats": repeats,
        "seed": seed,
        "measure": str(getattr(measure, "kind", measure)),
        "rng": RNG_ID,
        **{f"search.{k}": v for k, v in asdict(search_params).items() if k != "seed"},
        **{f"prune.{k}": v for k, v in asdict(prune_params).items() if k != "seed"},
    }
    return CvReport(
        folds,
        repeats,
        acc,
        leaves,
        float(np.mean(acc)),
        float(np.std(acc)),
        float(np.mean(leaves)),
        float(np.std(leaves)),
        float(np.mean([res.evals for res in results])),
        config,
        results,
    )


def format_report(report: CvReport, label: str = "OC1", fmt: str = "table") -> str:
    if fmt == "kv":
        lines = [f"{k}={v}" for k, v in report.config.items()]
        lines += [
            f"mean_accuracy={report.mean_accuracy:.6f}",
            f"sd_accuracy={report.sd_accuracy:.6f}",
            f"mean_leaves={report.mean_leaves:.6f}",
            f"sd_leaves={report.sd_leaves:.6f}",
            f"mean_evals={report.mean_evals:.1f}",
            "per_run_accuracy=" + ",".join(f"{a:.6f}" for a in report.per_run_accuracy),
        ]
        return "\n".join(lines) + "\n"
    head = f"{'Run':<12}{'Accuracy':>14}{'Size':>14}{'Hyperplanes':>14}"
    acc = f"{100 * report.mean_accuracy:.1f}±{100 * report.sd_accuracy:.1f}"
    size = f"{report.mean_leaves:.1f}±{report.sd_leaves:.1f}"
    row = f"{label:<12}{acc:>14}{size:>14}{report.mean_evals:>14.0f}"
    return head + "\n" + row + "\n"
