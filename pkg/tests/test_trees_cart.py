from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from treeids.trees import (
    Internal,
    LabeledMatrix,
    Leaf,
    NominalPartition,
    Threshold,
    TreeParams,
    node_count,
    predict,
    train_cart,
)

NO_PRUNE = TreeParams(cc_holdout_fraction=0.0)


def test_pure_data_gives_single_leaf():
    data = LabeledMatrix(np.random.default_rng(0).uniform(size=(20, 2)),
                         (0, 0), np.zeros(20, dtype=int), ("only", "other"))
    model = train_cart(data, NO_PRUNE)
    assert isinstance(model.root, Leaf)


def exhaustive_root_optimum(data):
    """Best achievable root impurity decrease, in exact rationals."""
    n = len(data.y)
    k = len(data.classes)
    total = [0] * k
    for c in data.y:
        total[c] += 1

    def gini_fr(counts, m):
        return 1 - sum(Fraction(int(c), m) ** 2 for c in counts)

    parent = gini_fr(total, n)

    def decrease(mask):
        nl = int(mask.sum())
        if nl == 0 or nl == n:
            return None
        left = [0] * k
        for c in data.y[mask]:
            left[c] += 1
        right = [t - l for t, l in zip(total, left)]
        return (
            parent
            - Fraction(nl, n) * gini_fr(left, nl)
            - Fraction(n - nl, n) * gini_fr(right, n - nl)
        )

    best = Fraction(0)
    for f, kind in enumerate(data.kinds):
        col = data.X[:, f]
        if kind == 0:
            for lo, hi in zip(*(lambda d: (d, d[1:]))(sorted(set(col.tolist())))):
                dec = decrease(col <= (lo + hi) / 2.0)
                if dec is not None and dec > best:
                    best = dec
        else:
            present = sorted(set(int(v) for v in col.tolist()))
            for size in range(1, len(present)):
                for left_codes in combinations(present, size):
                    dec = decrease(np.isin(col, left_codes))
                    if dec is not None and dec > best:
                        best = dec
    return best


def realized_root_decrease(model, data):
    if not isinstance(model.root, Internal):
        return Fraction(0)
    n = len(data.y)
    k = len(data.classes)
    pred = model.root.predicate
    col = data.X[:, pred.feature]
    if isinstance(pred, Threshold):
        mask = col <= pred.cut
    else:
        mask = np.isin(col.astype(int), sorted(pred.groups[0]))
    total = [0] * k
    for c in data.y:
        total[c] += 1
    left = [0] * k
    for c in data.y[mask]:
        left[c] += 1
    right = [t - l for t, l in zip(total, left)]
    nl = int(mask.sum())

    def gini_fr(counts, m):
        return 1 - sum(Fraction(int(c), m) ** 2 for c in counts)

    return (
        gini_fr(total, n)
        - Fraction(nl, n) * gini_fr(left, nl)
        - Fraction(n - nl, n) * gini_fr(right, n - nl)
    )


def test_root_split_matches_brute_force_on_small_sets():
    rng = np.random.default_rng(99)
    for trial in range(25):
        n = int(rng.integers(6, 50))
        n_feat = int(rng.integers(1, 5))
        kinds = tuple(int(rng.integers(0, 2)) * int(rng.integers(2, 5)) for _ in range(n_feat))
        cols = []
        for kind in kinds:
            if kind == 0:
                cols.append(np.round(rng.normal(size=n), 2))
            else:
                cols.append(rng.integers(0, kind, size=n).astype(float))
        X = np.column_stack(cols)
        y = rng.integers(0, int(rng.integers(2, 4)), size=n)
        classes = tuple(f"c{i}" for i in range(int(y.max()) + 1))
        data = LabeledMatrix(X, kinds, y, classes)
        model = train_cart(data, NO_PRUNE)
        assert realized_root_decrease(model, data) == exhaustive_root_optimum(data), trial


def test_nominal_partition_two_of_three_codes():
    codes = np.array([0.0, 0.0, 1.0, 1.0, 2.0, 2.0, 0.0, 2.0])
    y = np.isin(codes, [0.0, 2.0]).astype(int)
    data = LabeledMatrix(codes.reshape(-1, 1), (3,), y, ("no", "yes"))
    model = train_cart(data, NO_PRUNE)
    pred = model.root.predicate
    assert isinstance(pred, NominalPartition)
    groups = {frozenset(g - {3}) for g in pred.groups}  # ignore folded reserved code
    assert {frozenset({0, 2}), frozenset({1})} == {g for g in groups if g}


def test_high_cardinality_heuristic_still_splits():
    rng = np.random.default_rng(4)
    codes = rng.integers(0, 20, size=400).astype(float)
    y = (codes >= 10).astype(int)  # contiguous in class-probability order
    data = LabeledMatrix(codes.reshape(-1, 1), (20,), y, ("a", "b"))
    model = train_cart(data, NO_PRUNE)
    assert isinstance(model.root, Internal)
    hits = sum(predict(model, [float(c)])[0] == data.classes[yy] for c, yy in zip(codes, y))
    assert hits == len(y)


def test_holdout_pruning_shrinks_noisy_tree():
    rng = np.random.default_rng(8)
    X = rng.uniform(size=(300, 3))
    y = (X[:, 0] <= 0.5).astype(int)
    flip = rng.uniform(size=300) < 0.15  # label noise invites overfitting
    y[flip] = 1 - y[flip]
    data = LabeledMatrix(X, (0, 0, 0), y, ("a", "b"))
    full = train_cart(data, NO_PRUNE)
    pruned = train_cart(data, TreeParams(cc_holdout_fraction=0.3, seed=5))
    assert node_count(pruned) < node_count(full)


def test_binary_tree_shape():
    rng = np.random.default_rng(2)
    X = rng.uniform(size=(120, 3))
    y = ((X[:, 0] <= 0.3) | (X[:, 1] > 0.7)).astype(int)
    data = LabeledMatrix(X, (0, 0, 0), y, ("a", "b"))
    model = train_cart(data, NO_PRUNE)

    def walk(node):
        if isinstance(node, Leaf):
            return
        assert len(node.children) == 2
        for ch in node.children:
            walk(ch)

    walk(model.root)
