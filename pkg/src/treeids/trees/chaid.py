"""Chi-square interaction-detection tree over nominal features.

Every feature must arrive nominal (continuous columns get discretized
upstream). At each node the categories of each feature are merged
stepwise: the pair whose two-row chi-square has the largest p-value
merges, until every pairwise p-value is at or below alpha or only two
groups remain. The feature whose merged table has the smallest
Bonferroni-adjusted p-value splits the node multiway, one child per
group, provided that p-value clears alpha. No pruning afterwards.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels, stats
from ._common import counts_of, covering_groups, is_pure, majority_child, split_indices
from .model import CONTINUOUS, Internal, LabeledMatrix, Leaf, NominalPartition, TreeModel
from .params import TreeParams


def train_chaid(data: LabeledMatrix, params: TreeParams | None = None) -> TreeModel:
    params = params or TreeParams()
    for j, kind in enumerate(data.kinds):
        if kind == CONTINUOUS:
            raise ValueError(
                f"column {j} is continuous; discretize it to bins before CHAID training"
            )
    n_classes = len(data.classes)
    root = _grow(data, np.arange(len(data.y), dtype=np.int64), 0, params, n_classes)
    return TreeModel(root, data.classes, "CHAID", data.X.shape[1], params)


def _grow(data: LabeledMatrix, idx: np.ndarray, depth: int, params: TreeParams, n_classes: int):
    counts = counts_of(data.y[idx], n_classes)
    if (
        len(idx) < params.min_node_size
        or is_pure(counts)
        or (params.max_depth is not None and depth >= params.max_depth)
    ):
        return Leaf(counts)

    best = None  # (adjusted_p, feature, groups, group_rows)
    for f, n_codes in enumerate(data.kinds):
        cand = _merged_feature(data, idx, f, n_codes, params.alpha, n_classes)
        if cand is None:
            continue
        if best is None or cand[0] < best[0]:
            best = cand

    if best is None or best[0] > params.alpha:
        return Leaf(counts)

    _p, f, groups, group_sizes = best
    majority = majority_child(group_sizes)
    covering = covering_groups(groups, majority, data.kinds[f])
    predicate = NominalPartition(f, covering)
    children_idx = split_indices(data.X, idx, predicate)
    if any(len(ci) == 0 for ci in children_idx):
        return Leaf(counts)
    children = tuple(_grow(data, ci, depth + 1, params, n_classes) for ci in children_idx)
    return Internal(predicate, children, majority)


def _merged_feature(data, idx, f, n_codes, alpha, n_classes):
    """Stepwise-merge one feature; returns its adjusted p and groups."""
    col = np.ascontiguousarray(data.X[idx, f], dtype=np.float64)
    labels = np.ascontiguousarray(data.y[idx], dtype=np.int32)
    table = kernels.contingency(col, labels, n_codes, n_classes)
    present = [c for c in range(n_codes) if table[c].sum() > 0]
    if len(present) < 2:
        return None
    groups = [[c] for c in present]
    rows = [[int(v) for v in table[c]] for c in present]

    while len(groups) > 2:
        worst_p = None
        worst_pair = None
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                p = _assoc_p([rows[i], rows[j]])
                if worst_p is None or p > worst_p:
                    worst_p = p
                    worst_pair = (i, j)
        if worst_p is None or worst_p <= alpha:
            break
        i, j = worst_pair
        rows[i] = [a + b for a, b in zip(rows[i], rows[j])]
        groups[i] = sorted(groups[i] + groups[j])
        del rows[j], groups[j]
        order = sorted(range(len(groups)), key=lambda k: groups[k][0])
        groups = [groups[k] for k in order]
        rows = [rows[k] for k in order]

    p = _assoc_p(rows)
    adjusted = min(1.0, p * _bonferroni_multiplier(len(present), len(groups)))
    sizes = [sum(r) for r in rows]
    return (adjusted, f, groups, sizes)


def _assoc_p(rows) -> float:
    """Chi-square association p for a group x class count table.

    Degenerate tables (fewer than two live rows or columns after
    dropping empty margins) have no association to test: p = 1.
    """
    live_rows = [r for r in rows if sum(r) > 0]
    if len(live_rows) < 2:
        return 1.0
    n_cols = len(live_rows[0])
    live_cols = [j for j in range(n_cols) if any(r[j] > 0 for r in live_rows)]
    if len(live_cols) < 2:
        return 1.0
    cleaned = [[r[j] for j in live_cols] for r in live_rows]
    _stat, _df, p = stats.chi_square(cleaned)
    return p


def _bonferroni_multiplier(categories: int, groups: int) -> float:
    """Number of ways to reduce ``categories`` to ``groups`` nonempty sets."""
    total = 0.0
    for i in range(groups):
        total += (-1.0) ** i * (groups - i) ** categories / (
            math.factorial(i) * math.factorial(groups - i)
        )
    return max(1.0, total)
