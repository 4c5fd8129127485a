"""Strictly binary Gini tree with cost-complexity pruning.

Continuous features split at the midpoint threshold with the largest
impurity decrease; nominal features at the best two-set partition of
their codes (exhaustive up to 12 present codes, first-class-probability
ordering beyond that). The grown tree is pruned by the weakest-link
sequence, the final subtree picked by accuracy on a seeded holdout of
``cc_holdout_fraction`` training rows; a fraction of 0 keeps the full
tree grown on every row.
"""

from __future__ import annotations

import random

import numpy as np

from . import kernels
from ._common import (
    GAIN_EPS,
    counts_of,
    covering_groups,
    is_pure,
    majority_child,
    resubstitution_errors,
    route_child,
    sorted_column,
    split_indices,
)
from .model import CONTINUOUS, Internal, LabeledMatrix, Leaf, NominalPartition, Threshold, TreeModel
from .params import TreeParams

_EXHAUSTIVE_CODE_LIMIT = 12


def train_cart(data: LabeledMatrix, params: TreeParams | None = None) -> TreeModel:
    params = params or TreeParams()
    n = len(data.y)
    n_classes = len(data.classes)
    all_idx = np.arange(n, dtype=np.int64)

    n_hold = round(params.cc_holdout_fraction * n)
    if n_hold == 0 or n - n_hold == 0:
        root = _grow(data, all_idx, 0, params, n_classes)
        return TreeModel(root, data.classes, "CART", data.X.shape[1], params)

    order = list(range(n))
    random.Random(params.seed).shuffle(order)
    hold_idx = np.array(sorted(order[:n_hold]), dtype=np.int64)
    grow_idx = np.array(sorted(order[n_hold:]), dtype=np.int64)

    root = _grow(data, grow_idx, 0, params, n_classes)
    root = _select_by_holdout(root, data, hold_idx, n_classes)
    return TreeModel(root, data.classes, "CART", data.X.shape[1], params)


def _grow(data: LabeledMatrix, idx: np.ndarray, depth: int, params: TreeParams, n_classes: int):
    counts = counts_of(data.y[idx], n_classes)
    if (
        len(idx) < params.min_node_size
        or is_pure(counts)
        or (params.max_depth is not None and depth >= params.max_depth)
    ):
        return Leaf(counts)

    best = None  # (decrease, feature, payload)
    for f, kind in enumerate(data.kinds):
        if kind == CONTINUOUS:
            vals, labels = sorted_column(data.X, data.y, idx, f)
            res = kernels.best_threshold_gini(vals, labels, n_classes)
            if res is None:
                continue
            dec, cut = res
            cand = (dec, f, ("t", cut))
        else:
            cand = _best_binary_partition(data, idx, f, kind, n_classes)
            if cand is None:
                continue
        if best is None or cand[0] > best[0]:
            best = cand

    if best is None or best[0] <= GAIN_EPS:
        return Leaf(counts)

    _dec, f, payload = best
    if payload[0] == "t":
        predicate = Threshold(f, payload[1])
        children_idx = split_indices(data.X, idx, predicate)
        majority = majority_child([len(ci) for ci in children_idx])
    else:
        left_codes, right_codes, sizes = payload[1], payload[2], payload[3]
        majority = majority_child(sizes)
        groups = covering_groups([left_codes, right_codes], majority, data.kinds[f])
        predicate = NominalPartition(f, groups)
        children_idx = split_indices(data.X, idx, predicate)

    if any(len(ci) == 0 for ci in children_idx):
        return Leaf(counts)
    children = tuple(_grow(data, ci, depth + 1, params, n_classes) for ci in children_idx)
    return Internal(predicate, children, majority)


def _best_binary_partition(data, idx, f, n_codes, n_classes):
    """Best left/right code split of a nominal feature by Gini decrease."""
    col = np.ascontiguousarray(data.X[idx, f], dtype=np.float64)
    labels = np.ascontiguousarray(data.y[idx], dtype=np.int32)
    table = kernels.contingency(col, labels, n_codes, n_classes)
    present = [c for c in range(n_codes) if table[c].sum() > 0]
    if len(present) < 2:
        return None
    n = len(idx)
    totals = [int(table[:, k].sum()) for k in range(n_classes)]
    parent = _gini_of(totals, n)

    def decrease_for(left_set):
        left = [0] * n_classes
        nl = 0
        for c in left_set:
            row = table[c]
            for k in range(n_classes):
                left[k] += int(row[k])
            nl += int(row.sum())
        nr = n - nl
        if nl == 0 or nr == 0:
            return None
        right = [totals[k] - left[k] for k in range(n_classes)]
        weighted = (nl / n) * _gini_of(left, nl) + (nr / n) * _gini_of(right, nr)
        return parent - weighted, nl, nr

    best = None  # (decrease, left_codes, right_codes, sizes)
    if len(present) <= _EXHAUSTIVE_CODE_LIMIT:
        rest = present[1:]
        for bits in range(2 ** len(rest) - 1):
            left_set = [present[0]] + [c for i, c in enumerate(rest) if bits >> i & 1]
            res = decrease_for(left_set)
            if res is None:
                continue
            dec, nl, nr = res
            if best is None or dec > best[0]:
                right_set = [c for c in present if c not in left_set]
                best = (dec, left_set, right_set, [nl, nr])
    else:
        # order codes by first-class probability, scan contiguous prefixes
        def first_class_share(c):
            s = int(table[c].sum())
            return (int(table[c, 0]) / s, c)

        ordered = sorted(present, key=first_class_share)
        for cut_at in range(1, len(ordered)):
            left_set = ordered[:cut_at]
            res = decrease_for(left_set)
            if res is None:
                continue
            dec, nl, nr = res
            if best is None or dec > best[0]:
                right_set = [c for c in present if c not in left_set]
                best = (dec, sorted(left_set), right_set, [nl, nr])
    if best is None:
        return None
    dec, left_set, right_set, sizes = best
    return (dec, f, ("n", left_set, right_set, sizes))


def _gini_of(counts, total) -> float:
    s = 0.0
    for c in counts:
        p = c / total
        s += p * p
    return 1.0 - s


# --- cost-complexity pruning ---------------------------------------------


def _select_by_holdout(root, data, hold_idx, n_classes):
    candidates = _pruning_sequence(root, n_classes)
    X, y = data.X, data.y
    best_tree = None
    best_correct = -1
    for tree in candidates:  # increasing alpha: later entries are smaller
        correct = 0
        for i in hold_idx:
            node = tree
            while isinstance(node, Internal):
                node = node.children[route_child(node, X[i])]
            counts = node.class_counts
            pred = min(range(n_classes), key=lambda k: (-counts[k], k))
            if pred == y[i]:
                correct += 1
        if correct >= best_correct:  # ties prefer the smaller tree
            best_correct = correct
            best_tree = tree
    return best_tree


def _pruning_sequence(root, n_classes):
    """Nested weakest-link subtrees, from the full tree down to a stump."""
    seq = [root]
    current = root
    while isinstance(current, Internal):
        alpha = _min_link(current, n_classes)[0]
        current = _collapse_links(current, alpha, n_classes)
        seq.append(current)
    return seq


def _min_link(node, n_classes):
    """Smallest g(t) = (R(leaf) - R(subtree)) / (leaves - 1) below node."""
    best = None

    def walk(nd):
        nonlocal best
        if isinstance(nd, Leaf):
            return resubstitution_errors(nd.class_counts), 1, list(nd.class_counts)
        err = 0
        leaves = 0
        counts = [0] * n_classes
        for ch in nd.children:
            e, l, cc = walk(ch)
            err += e
            leaves += l
            for k in range(n_classes):
                counts[k] += cc[k]
        own = resubstitution_errors(counts)
        g = (own - err) / (leaves - 1)
        if best is None or g < best:
            best = g
        return err, leaves, counts

    walk(node)
    return best, None


def _collapse_links(node, alpha, n_classes):
    """Collapse every internal node whose link strength is <= alpha."""

    def walk(nd):
        if isinstance(nd, Leaf):
            return nd, resubstitution_errors(nd.class_counts), 1, list(nd.class_counts)
        children = []
        err = 0
        leaves = 0
        counts = [0] * n_classes
        for ch in nd.children:
            c, e, l, cc = walk(ch)
            children.append(c)
            err += e
            leaves += l
            for k in range(n_classes):
                counts[k] += cc[k]
        own = resubstitution_errors(counts)
        if leaves > 1:
            g = (own - err) / (leaves - 1)
            if g <= alpha + 1e-12:
                return Leaf(tuple(counts)), own, 1, counts
        kept = Internal(nd.predicate, tuple(children), nd.majority_child)
        return kept, err, leaves, counts

    return walk(node)[0]
