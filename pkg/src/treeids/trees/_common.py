"""Helpers shared by the tree growers."""

from __future__ import annotations

import numpy as np

from .model import Internal, Leaf, NominalPartition, Threshold

GAIN_EPS = 1e-12


def counts_of(y_slice, n_classes: int) -> tuple[int, ...]:
    return tuple(int(c) for c in np.bincount(y_slice, minlength=n_classes))


def is_pure(counts) -> bool:
    return sum(1 for c in counts if c > 0) <= 1


def majority_child(child_sizes) -> int:
    """Index of the largest child; ties go to the lower index."""
    return min(range(len(child_sizes)), key=lambda i: (-child_sizes[i], i))


def covering_groups(present_groups, majority: int, n_codes: int):
    """Extend groups over codes absent at this node.

    Absent codes (including the reserved unseen-token code) are folded
    into the majority child's group so the partition covers the whole
    code range and routing stays total.
    """
    seen = set()
    for g in present_groups:
        seen |= set(g)
    absent = [c for c in range(n_codes) if c not in seen]
    groups = [set(g) for g in present_groups]
    groups[majority].update(absent)
    return tuple(frozenset(g) for g in groups)


def sorted_column(X: np.ndarray, y: np.ndarray, idx: np.ndarray, feature: int):
    """Column restricted to ``idx``, sorted ascending, kernel-ready."""
    col = X[idx, feature]
    order = np.argsort(col, kind="stable")
    vals = np.ascontiguousarray(col[order], dtype=np.float64)
    labels = np.ascontiguousarray(y[idx][order], dtype=np.int32)
    return vals, labels


def split_indices(X: np.ndarray, idx: np.ndarray, predicate) -> list[np.ndarray]:
    """Row indices per child, in child order."""
    if isinstance(predicate, Threshold):
        col = X[idx, predicate.feature]
        mask = col <= predicate.cut
        return [idx[mask], idx[~mask]]
    assert isinstance(predicate, NominalPartition)
    col = X[idx, predicate.feature].astype(np.int64)
    out = []
    for g in predicate.groups:
        mask = np.isin(col, sorted(g))
        out.append(idx[mask])
    return out


def subtree_counts(node, n_classes: int) -> tuple[int, ...]:
    if isinstance(node, Leaf):
        return node.class_counts
    acc = [0] * n_classes
    for ch in node.children:
        for i, c in enumerate(subtree_counts(ch, n_classes)):
            acc[i] += c
    return tuple(acc)


def resubstitution_errors(counts) -> int:
    """Errors if the node were a leaf predicting its majority class."""
    return sum(counts) - max(counts)


def route_child(node: Internal, x) -> int:
    pred = node.predicate
    if isinstance(pred, Threshold):
        return 0 if x[pred.feature] <= pred.cut else 1
    routed = pred.route(int(x[pred.feature]))
    return routed if routed is not None else node.majority_child
