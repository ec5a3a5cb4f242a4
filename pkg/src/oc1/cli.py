"""Command line entry point: ``oc1 {generate,train,predict,cv,prune}``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import datagen
from .dataset import DataFormatError, load, save
from .evaluation import format_report, k_fold_cv
from .impurity import MEASURES
from .pruning import PruneParams, score_sequence, select_index, train_with_pruning, weakest_link_sequence
from .split_search import ORDERS, RNG_ID, SearchParams
from .tree import TreeFormatError, load_tree, save_tree

log = logging.getLogger("oc1")


class UsageError(Exception):
    pass


def _search_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("split search")
    g.add_argument("--impurity", choices=MEASURES, default="twoing")
    g.add_argument("--restarts", type=int, default=20, metavar="N")
    g.add_argument("--jumps", type=int, default=5, metavar="J")
    g.add_argument("--order", choices=ORDERS, default="seq")
    g.add_argument("--seed", type=int, default=None, metavar="S", help="master seed (falls back to $OC1_SEED, then 0)")
    g.add_argument("--axis-parallel", action="store_true", help="only consider axis-parallel splits")
    g.add_argument("--ap-bias", type=float, default=1.0, metavar="B")
    g.add_argument("--min-oblique-factor", type=float, default=2, metavar="F")
    g.add_argument("--p-stag", type=float, default=1.0, metavar="P", help="initial stagnation probability")


def _prune_flags(p: argparse.ArgumentParser, default_fraction: float = 0.10) -> None:
    g = p.add_argument_group("pruning")
    g.add_argument("--prune-fraction", type=float, default=default_fraction, metavar="P", help="0 disables pruning")
    g.add_argument("--se", type=float, default=None, metavar="K", help="k of the k-SE rule (default 0)")
    g.add_argument("--prune-seed", type=int, default=None, metavar="S")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--missing", default="?", help="missing-value marker in data files")
    p.add_argument("--format", choices=("table", "kv"), default="table")
    p.add_argument("-v", "--verbose", action="count", default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oc1", description="Oblique decision tree induction.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic dataset")
    p.add_argument("--kind", choices=sorted(datagen.GENERATORS), required=True)
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--d", type=int, default=None, help="attributes (linear only)")
    p.add_argument("--plane", default=None, help="comma-separated a_1..a_{d+1} (linear only)")
    p.add_argument("--offsets", default=None, help="comma-separated line offsets (pol only)")
    p.add_argument("--angle", type=float, default=None, help="rotation in degrees (rcb only)")
    p.add_argument("--grid", default=None, help="cells as NUxNV, e.g. 4x2 (rcb only)")
    _common(p)

    p = sub.add_parser("train", help="grow (and prune) a tree")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    _search_flags(p)
    _prune_flags(p)
    _common(p)

    p = sub.add_parser("predict", help="label rows with a saved tree")
    p.add_argument("--tree", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", default=None, help="labels file (default stdout)")
    _common(p)

    p = sub.add_parser("cv", help="repeated k-fold cross-validation")
    p.add_argument("--data", required=True)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--threads", type=int, default=1, metavar="T")
    p.add_argument("--label", default=None, help="row label in the table (default R:J)")
    _search_flags(p)
    _prune_flags(p)
    _common(p)

    p = sub.add_parser("prune", help="prune a saved tree against a pruning set")
    p.add_argument("--tree", required=True)
    p.add_argument("--data", required=True, help="pruning set")
    p.add_argument("--out", required=True)
    p.add_argument("--se", type=float, default=0.0, metavar="K")
    _common(p)
    return parser


def _seed(value) -> int:
    if value is not None:
        return value
    env = os.environ.get("OC1_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"OC1_SEED must be an integer, got {env!r}") from None


def _search_params(args) -> SearchParams:
    return SearchParams(
        restarts=args.restarts,
        max_jumps=args.jumps,
        order=args.order,
        p_stag_initial=args.p_stag,
        seed=_seed(args.seed),
        axis_parallel_only=args.axis_parallel,
        min_examples_factor=args.min_oblique_factor,
        ap_bias=args.ap_bias,
    )


def _prune_params(args, seed: int) -> PruneParams:
    if args.prune_fraction == 0 and args.se is not None:
        raise UsageError("--se has no effect when pruning is disabled (--prune-fraction 0)")
    return PruneParams(
        se_factor=0.0 if args.se is None else args.se,
        prune_fraction=args.prune_fraction,
        seed=seed if args.prune_seed is None else args.prune_seed,
    )


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _echo(config: dict, stream) -> None:
    for key, value in config.items():
        stream.write(f"# {key}={value}\n")


def _config(args, **extra) -> dict:
    skip = {"verbose"}
    out = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    out.update(extra)
    out["rng"] = RNG_ID
    return out


def cmd_generate(args) -> int:
    seed = _seed(args.seed)
    params = {}
    if args.kind == "linear":
        if args.d is None or args.plane is None:
            raise UsageError("--kind linear needs --d and --plane")
        params = {"d": args.d, "plane": _floats(args.plane)}
    elif args.d is not None or args.plane is not None:
        raise UsageError("--d/--plane only apply to --kind linear")
    if args.offsets is not None:
        if args.kind != "pol":
            raise UsageError("--offsets only applies to --kind pol")
        params["offsets"] = tuple(_floats(args.offsets))
    if args.angle is not None or args.grid is not None:
        if args.kind != "rcb":
            raise UsageError("--angle/--grid only apply to --kind rcb")
        if args.angle is not None:
            params["angle"] = args.angle
        if args.grid is not None:
            try:
                nu, nv = (int(v) for v in args.grid.lower().split("x"))
            except ValueError:
                raise UsageError(f"--grid must look like 4x2, got {args.grid!r}") from None
            params["grid"] = (nu, nv)
    spec = datagen.GenSpec(args.kind, args.n, seed, params)
    ds = datagen.generate(spec)
    save(ds, args.out, missing=args.missing)
    _echo(_config(args, seed=seed), sys.stdout)
    counts = ds.class_counts()
    sys.stdout.write(f"wrote {ds.n} examples, d={ds.d}, k={ds.k}, class counts {counts.tolist()} to {args.out}\n")
    return 0


def cmd_train(args) -> int:
    ds = load(args.data, missing=args.missing)
    sp = _search_params(args)
    pp = _prune_params(args, sp.seed)
    tree = train_with_pruning(ds.impute(), sp, pp, args.impurity)
    save_tree(tree, args.out)
    config = _config(args, seed=sp.seed, prune_seed=pp.seed, se=pp.se_factor)
    _echo(config, sys.stdout)
    acc = tree.accuracy(ds.impute(tree.attribute_means))
    if args.format == "kv":
        sys.stdout.write(f"leaves={tree.leaf_count}\ndepth={tree.depth()}\nhyperplanes={tree.evals}\ntraining_accuracy={acc:.6f}\n")
    else:
        sys.stdout.write(f"{'Leaves':>8}{'Depth':>8}{'Hyperplanes':>14}{'TrainAcc':>10}\n")
        sys.stdout.write(f"{tree.leaf_count:>8}{tree.depth():>8}{tree.evals:>14}{100 * acc:>10.1f}\n")
    return 0


def cmd_predict(args) -> int:
    tree = load_tree(args.tree)
    ds = load(args.data, missing=args.missing)
    if ds.d != tree.d:
        raise UsageError(f"tree expects {tree.d} attributes, data has {ds.d}")
    labels = tree.predict_raw(ds.X)
    text = "".join(f"{int(v)}\n" for v in labels)
    if args.out is None:
        _echo(_config(args), sys.stderr)
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
        _echo(_config(args), sys.stdout)
    return 0


def cmd_cv(args) -> int:
    ds = load(args.data, missing=args.missing)
    sp = _search_params(args)
    pp = _prune_params(args, sp.seed)
    if args.threads < 1:
        raise UsageError("--threads must be positive")
    if args.threads > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            report = k_fold_cv(ds, args.folds, args.repeats, sp.seed, sp, pp, args.impurity, executor=pool)
    else:
        report = k_fold_cv(ds, args.folds, args.repeats, sp.seed, sp, pp, args.impurity)
    label = args.label or ("AP" if sp.axis_parallel_only else f"{sp.restarts}:{sp.max_jumps}")
    config = _config(args, seed=sp.seed, se=pp.se_factor)
    config.pop("threads")
    _echo(config, sys.stdout)
    sys.stdout.write(format_report(report, label, args.format))
    return 0


def cmd_prune(args) -> int:
    tree = load_tree(args.tree)
    ds = load(args.data, missing=args.missing)
    if tree.root.is_leaf:
        raise UsageError("tree is a single leaf; nothing to prune")
    prune_set = ds.impute(tree.attribute_means) if tree.attribute_means is not None else ds.impute()
    seq = score_sequence(weakest_link_sequence(tree), prune_set)
    chosen = select_index(seq, args.se, prune_set.n)
    save_tree(seq[chosen].tree, args.out)
    _echo(_config(args), sys.stdout)
    sys.stdout.write(f"{'Step':>6}{'Alpha':>12}{'Leaves':>8}{'Accuracy':>10}\n")
    for i, s in enumerate(seq):
        mark = " *" if i == chosen else ""
        sys.stdout.write(f"{i:>6}{s.alpha:>12.4f}{s.leaf_count:>8}{100 * s.accuracy:>10.1f}{mark}\n")
    return 0


COMMANDS = {
    "generate": cmd_generate,
    "train": cmd_train,
    "predict": cmd_predict,
    "cv": cmd_cv,
    "prune": cmd_prune,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"oc1: error: {exc}\n")
        return 2
    except (DataFormatError, TreeFormatError, ValueError, OSError) as exc:
        sys.stderr.write(f"oc1: error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
