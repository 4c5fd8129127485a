import math

import numpy as np
import pytest
from scipy import stats as sps

from treeids.trees import (
    Internal,
    LabeledMatrix,
    Leaf,
    NominalPartition,
    TreeParams,
    predict,
    train_chaid,
)


def test_rejects_continuous_features():
    data = LabeledMatrix(np.zeros((4, 1)), (0,), np.array([0, 1, 0, 1]), ("a", "b"))
    with pytest.raises(ValueError, match="discretize"):
        train_chaid(data)


def test_no_significant_feature_gives_leaf():
    # identical class distribution in both categories: nothing to split on
    codes = np.array([0.0, 0.0, 1.0, 1.0] * 10)
    y = np.array([0, 1, 0, 1] * 10)
    data = LabeledMatrix(codes.reshape(-1, 1), (2,), y, ("a", "b"))
    model = train_chaid(data)
    assert isinstance(model.root, Leaf)


def test_identical_categories_merge_first():
    # codes 0 and 1 share one class profile, code 2 is opposite
    rows = []
    for code, (n_a, n_b) in ((0, (12, 4)), (1, (12, 4)), (2, (2, 14))):
        rows += [(float(code), 0)] * n_a + [(float(code), 1)] * n_b
    X = np.array([[c] for c, _y in rows])
    y = np.array([label for _c, label in rows])
    data = LabeledMatrix(X, (3,), y, ("a", "b"))
    model = train_chaid(data)
    assert isinstance(model.root, Internal)
    pred = model.root.predicate
    assert isinstance(pred, NominalPartition)
    groups = [set(g) for g in pred.groups]
    merged = next(g for g in groups if 0 in g)
    assert 1 in merged and 2 not in merged


def _scripted_chaid_step(columns, y, alpha):
    """Independent single-node CHAID step using scipy's chi-square.

    Returns (chosen feature, groups) or None, following stepwise
    pairwise merging with Kass's grouping multiplier.
    """

    def p_of(table):
        table = np.asarray(table, dtype=float)
        table = table[table.sum(axis=1) > 0][:, table.sum(axis=0) > 0]
        if table.shape[0] < 2 or table.shape[1] < 2:
            return 1.0
        stat, p, _df, _e = sps.chi2_contingency(table, correction=False)
        return p

    def kass(c, r):
        return max(
            1.0,
            sum(
                (-1.0) ** i * (r - i) ** c / (math.factorial(i) * math.factorial(r - i))
                for i in range(r)
            ),
        )

    best = None
    for f, col in enumerate(columns):
        cats = sorted(set(col))
        if len(cats) < 2:
            continue
        groups = [[c] for c in cats]
        rows = [
            [int(((col == c) & (y == cls)).sum()) for cls in sorted(set(y))]
            for c in cats
        ]
        while len(groups) > 2:
            worst = None
            for i in range(len(groups)):
                for j in range(i + 1, len(groups)):
                    p = p_of([rows[i], rows[j]])
                    if worst is None or p > worst[0]:
                        worst = (p, i, j)
            if worst[0] <= alpha:
                break
            _p, i, j = worst
            rows[i] = [a + b for a, b in zip(rows[i], rows[j])]
            groups[i] = sorted(groups[i] + groups[j])
            del rows[j], groups[j]
            order = sorted(range(len(groups)), key=lambda k: groups[k][0])
            groups = [groups[k] for k in order]
            rows = [rows[k] for k in order]
        adj = min(1.0, p_of(rows) * kass(len(cats), len(groups)))
        if best is None or adj < best[0]:
            best = (adj, f, groups)
    if best is None or best[0] > alpha:
        return None
    return best[1], best[2]


def test_root_matches_scripted_oracle():
    rng = np.random.default_rng(31)
    for trial in range(15):
        n = 120
        col0 = rng.integers(0, 4, size=n).astype(float)
        col1 = rng.integers(0, 3, size=n).astype(float)
        logits = 0.9 * (col0 >= 2) + 0.4 * (col1 == 1)
        y = (rng.uniform(size=n) < 1 / (1 + np.exp(-2 * (logits - 0.6)))).astype(int)
        if len(set(y.tolist())) < 2:
            continue
        data = LabeledMatrix(np.column_stack([col0, col1]), (4, 3), y, ("a", "b"))
        model = train_chaid(data, TreeParams(max_depth=1))
        want = _scripted_chaid_step([col0, col1], y, 0.05)
        if want is None:
            assert isinstance(model.root, Leaf), trial
            continue
        feature, groups = want
        assert isinstance(model.root, Internal), trial
        assert model.root.predicate.feature == feature, trial
        got_groups = [sorted(g) for g in model.root.predicate.groups]
        # ignore absent/reserved codes folded into the majority group
        present = set(data.X[:, feature].astype(int).tolist())
        got_groups = [sorted(set(g) & present) for g in got_groups]
        assert sorted(map(tuple, got_groups)) == sorted(map(tuple, groups)), trial


def test_multiway_split_one_child_per_group():
    rows = []
    for code, cls in ((0, 0), (1, 1), (2, 2)):
        rows += [(float(code), cls)] * 15
    X = np.array([[c] for c, _y in rows])
    y = np.array([c for _x, c in rows])
    data = LabeledMatrix(X, (4,), y, ("a", "b", "c"))
    model = train_chaid(data)
    assert isinstance(model.root, Internal)
    assert len(model.root.children) == 3
    for code, cls in ((0.0, "a"), (1.0, "b"), (2.0, "c"), (3.0, None)):
        label, conf = predict(model, [code])
        if cls is not None:
            assert label == cls and conf == 1.0


def test_no_pruning_performed():
    # a significant split stays split even when children are tiny
    rows = [(0.0, 0)] * 20 + [(1.0, 1)] * 3
    X = np.array([[c] for c, _y in rows])
    y = np.array([c for _x, c in rows])
    data = LabeledMatrix(X, (2,), y, ("a", "b"))
    model = train_chaid(data)
    assert isinstance(model.root, Internal)
