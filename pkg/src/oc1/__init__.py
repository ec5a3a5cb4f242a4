"""Oblique decision trees grown by randomized coefficient hill climbing."""

from .dataset import Dataset, from_arrays, impute_missing, load, partition, save
from .impurity import MEASURES, ImpurityMeasure, SplitCounts
from .split_search import (
    RNG_ID,
    Hyperplane,
    SearchParams,
    SearchStats,
    SplitCandidate,
    best_axis_parallel,
    find_split,
    side_of,
)
from .tree import DecisionTree, classify, deserialize, induce, load_tree, save_tree, serialize
from .pruning import PruneParams, select_pruned, train_with_pruning, weakest_link_sequence
from .evaluation import CvReport, confusion_and_accuracy, k_fold_cv
from .datagen import gen_linear, gen_ls10, gen_pol, gen_rcb

__version__ = "0.1.0"
