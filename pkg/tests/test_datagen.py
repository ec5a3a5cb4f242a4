import numpy as np
import pytest

from oc1.datagen import (
    GenSpec,
    gen_linear,
    gen_ls10,
    gen_pol,
    gen_rcb,
    generate,
    ls10_labels,
    pol_regions,
    pol_true_tree,
    rcb_cells,
    rcb_true_tree,
)



def test_ls10_extreme_point():
    x = np.array([[0.0] * 5 + [1.0] * 5])
    assert ls10_labels(x).tolist() == [1]
    assert ls10_labels(np.full((1, 10), 0.5)).tolist() == [0]


def test_ls10_balance_and_consistency():
    ds = gen_ls10(2000, seed=0)
    assert ds.d == 10
    ones = int(ds.y.sum())
    # binomial(2000, 0.5): sigma = sqrt(500)
    assert abs(ones - 1000) <= 4 * np.sqrt(500)
    lhs = ds.X[:, :5].sum(axis=1)
    rhs = ds.X[:, 5:].sum(axis=1)
    assert np.array_equal(ds.y, (lhs < rhs).astype(int))
    assert ds.X.min() >= 0 and ds.X.max() <= 1


def test_pol_middle_region():
    assert pol_regions(np.array([[0.5, 0.5]])).tolist() == [2]
    assert gen_pol(1).classes.tolist() == [0, 1]


def test_pol_five_regions_and_true_tree():
    ds = gen_pol(2000, seed=0)
    regions = pol_regions(ds.X)
    assert sorted(np.unique(regions).tolist()) == [0, 1, 2, 3, 4]
    assert np.array_equal(ds.y, regions % 2)
    tree = pol_true_tree()
    assert tree.leaf_count == 5
    assert tree.accuracy(ds) == 1.0


def test_pol_offsets_override():
    ds = gen_pol(500, seed=1, offsets=(-0.3, 0.3))
    assert np.array_equal(ds.y, pol_regions(ds.X, (-0.3, 0.3)) % 2)
    assert pol_true_tree((-0.3, 0.3)).accuracy(ds) == 1.0


def test_rcb_eight_categories_and_true_tree():
    ds = gen_rcb(2000, seed=0)
    assert ds.k == 8
    assert np.all(ds.class_counts() > 0)
    assert np.array_equal(ds.y, rcb_cells(ds.X))
    tree = rcb_true_tree()
    assert tree.leaf_count == 8
    assert tree.accuracy(ds) == 1.0


def test_rcb_no_axis_split_isolates_a_category():
    # corner slivers of one or two points can be pure, so thresholds leaving under 1% of the
    # data on one side are skipped; every other axis-parallel split mixes categories on both sides
    ds = gen_rcb(2000, seed=0)
    for i in range(2):
        order = np.sort(np.unique(ds.X[:, i]))
        for lo, hi in zip(order, order[1:]):
            above = ds.X[:, i] > (lo + hi) / 2
            if min(above.sum(), (~above).sum()) < 0.01 * ds.n:
                continue
            assert np.unique(ds.y[above]).size >= 2
            assert np.unique(ds.y[~above]).size >= 2


def test_linear_generator():
    ds = gen_linear(200, 1, [1.0, -0.5], seed=0)
    assert np.array_equal(ds.y, (ds.X[:, 0] > 0.5).astype(int))
    flipped = gen_linear(200, 1, [-1.0, 0.5], seed=0)
    assert np.array_equal(flipped.y, 1 - ds.y)
    with pytest.raises(ValueError):
        gen_linear(10, 2, [1.0, 0.0])


def test_generators_deterministic():
    for fn in (gen_ls10, gen_pol, gen_rcb):
        a, b = fn(100, seed=4), fn(100, seed=4)
        assert np.array_equal(a.X, b.X) and np.array_equal(a.y, b.y)
        assert not np.array_equal(a.X, fn(100, seed=5).X)


def test_generate_records_spec_in_header():
    ds = generate(GenSpec("pol", 50, 7, {"offsets": (-0.5, 0.5)}))
    assert ds.header[0] == "generator kind=pol n=50 seed=7 offsets=(-0.5, 0.5)"
    with pytest.raises(ValueError):
        GenSpec("spiral", 10)
    with pytest.raises(ValueError):
        GenSpec("pol", 0)
