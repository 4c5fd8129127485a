"""Gain-ratio tree with pessimistic post-pruning.

Greedy growth: every continuous feature offers its best midpoint
threshold, every nominal feature a one-group-per-code multiway split;
the candidate with the highest gain ratio (among positive-gain
candidates) wins, ties going to the lower feature index and then the
lower cut. Pruning collapses a subtree when an upper confidence bound
on its leaf-ified error is no worse than the subtree's own bound.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from . import kernels, stats
from ._common import (
    GAIN_EPS,
    counts_of,
    covering_groups,
    is_pure,
    majority_child,
    sorted_column,
    split_indices,
    subtree_counts,
)
from .model import CONTINUOUS, Internal, LabeledMatrix, Leaf, NominalPartition, Threshold, TreeModel
from .params import TreeParams


def train_c5(data: LabeledMatrix, params: TreeParams | None = None) -> TreeModel:
    params = params or TreeParams()
    n_classes = len(data.classes)
    root = _grow(data, np.arange(len(data.y), dtype=np.int64), 0, params, n_classes)
    root = _prune(root, params.prune_cf, n_classes)[0]
    return TreeModel(root, data.classes, "C5", data.X.shape[1], params)


def _grow(data: LabeledMatrix, idx: np.ndarray, depth: int, params: TreeParams, n_classes: int):
    counts = counts_of(data.y[idx], n_classes)
    if (
        len(idx) < params.min_node_size
        or is_pure(counts)
        or (params.max_depth is not None and depth >= params.max_depth)
    ):
        return Leaf(counts)

    best = None  # (ratio, feature, payload)
    parent_entropy = stats.entropy(counts)
    for f, kind in enumerate(data.kinds):
        if kind == CONTINUOUS:
            vals, labels = sorted_column(data.X, data.y, idx, f)
            res = kernels.best_threshold_gain_ratio(vals, labels, n_classes)
            if res is None:
                continue
            ratio, _gain, cut = res
            cand = (ratio, f, ("t", cut))
        else:
            cand = _nominal_candidate(data, idx, f, kind, counts, parent_entropy, n_classes)
            if cand is None:
                continue
        if best is None or cand[0] > best[0]:
            best = cand

    if best is None:
        return Leaf(counts)

    _ratio, f, payload = best
    if payload[0] == "t":
        predicate = Threshold(f, payload[1])
        children_idx = split_indices(data.X, idx, predicate)
        majority = majority_child([len(ci) for ci in children_idx])
    else:
        present_groups = payload[1]
        sizes = payload[2]
        majority = majority_child(sizes)
        groups = covering_groups(present_groups, majority, data.kinds[f])
        predicate = NominalPartition(f, groups)
        children_idx = split_indices(data.X, idx, predicate)

    if any(len(ci) == 0 for ci in children_idx):
        return Leaf(counts)
    children = tuple(_grow(data, ci, depth + 1, params, n_classes) for ci in children_idx)
    return Internal(predicate, children, majority)


def _nominal_candidate(data, idx, f, n_codes, parent_counts, parent_entropy, n_classes):
    """One-group-per-present-code multiway candidate, scored by gain ratio."""
    col = np.ascontiguousarray(data.X[idx, f], dtype=np.float64)
    labels = np.ascontiguousarray(data.y[idx], dtype=np.int32)
    table = kernels.contingency(col, labels, n_codes, n_classes)
    present = [c for c in range(n_codes) if table[c].sum() > 0]
    if len(present) < 2:
        return None
    n = len(idx)
    gain = parent_entropy
    split_info = 0.0
    sizes = []
    for c in present:
        row = tuple(int(v) for v in table[c])
        size = sum(row)
        sizes.append(size)
        w = size / n
        gain -= w * stats.entropy(row)
        split_info -= w * math.log2(w)
    if gain <= GAIN_EPS or split_info <= 0.0:
        return None
    ratio = gain / split_info
    groups = [[c] for c in present]
    return (ratio, f, ("n", groups, sizes))


def _prune(node, cf: float, n_classes: int):
    """Bottom-up pessimistic pruning; returns (node, estimated errors)."""
    if isinstance(node, Leaf):
        return node, _leaf_estimate(node.class_counts, cf)
    pruned = []
    subtree_est = 0.0
    for ch in node.children:
        p, est = _prune(ch, cf, n_classes)
        pruned.append(p)
        subtree_est += est
    counts = subtree_counts(node, n_classes)
    leaf_est = _leaf_estimate(counts, cf)
    if leaf_est <= subtree_est + 1e-9:
        leaf = Leaf(counts)
        return leaf, leaf_est
    kept = Internal(node.predicate, tuple(pruned), node.majority_child)
    return kept, subtree_est


def _leaf_estimate(counts, cf: float) -> float:
    n = sum(counts)
    e = n - max(counts)
    return _upper_bound(e, n, cf) * n


@lru_cache(maxsize=65536)
def _upper_bound(errors: int, n: int, cf: float) -> float:
    return stats.binom_upper(errors, n, cf)
