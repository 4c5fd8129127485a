"""Binary tree with split-free attribute selection.

Feature choice never scans candidate splits, which is what keeps the
selection unbiased on uninformative features: continuous columns are
scored by a one-way ANOVA F-test across classes, nominal columns by a
chi-square test, and the smallest Bonferroni-adjusted p-value wins.
Only then is a split point computed for the chosen feature: classes are
pooled into two superclasses by 2-means on their per-class means
(seeded, so row order never matters) and the cut is the univariate
quadratic-discriminant boundary between the superclass distributions.
Nominal features split the category with the largest first-superclass
share against the rest. No pruning.
"""

from __future__ import annotations

import math
import random

import numpy as np

from . import kernels, stats
from ._common import counts_of, covering_groups, is_pure, majority_child, split_indices
from .model import CONTINUOUS, Internal, LabeledMatrix, Leaf, NominalPartition, Threshold, TreeModel
from .params import TreeParams

_VAR_TOL = 1e-12


def train_quest(data: LabeledMatrix, params: TreeParams | None = None) -> TreeModel:
    params = params or TreeParams()
    n_classes = len(data.classes)
    root = _grow(data, np.arange(len(data.y), dtype=np.int64), 0, params, n_classes)
    return TreeModel(root, data.classes, "QUEST", data.X.shape[1], params)


def _grow(data: LabeledMatrix, idx: np.ndarray, depth: int, params: TreeParams, n_classes: int):
    counts = counts_of(data.y[idx], n_classes)
    if (
        len(idx) < params.min_node_size
        or is_pure(counts)
        or (params.max_depth is not None and depth >= params.max_depth)
    ):
        return Leaf(counts)

    feature = select_feature(data, idx, n_classes)
    if feature is None:
        return Leaf(counts)

    kind = data.kinds[feature]
    if kind == CONTINUOUS:
        predicate = _continuous_split(data, idx, feature, counts, params)
    else:
        predicate = _nominal_split(data, idx, feature, kind, counts, params, n_classes)
    if predicate is None:
        return Leaf(counts)

    children_idx = split_indices(data.X, idx, predicate)
    if any(len(ci) == 0 for ci in children_idx):
        return Leaf(counts)
    majority = majority_child([len(ci) for ci in children_idx])
    if isinstance(predicate, NominalPartition):
        # rebuild with absent codes folded into the majority group
        groups = covering_groups(
            [sorted(g) for g in predicate.groups], majority, kind
        )
        predicate = NominalPartition(feature, groups)
        children_idx = split_indices(data.X, idx, predicate)
    children = tuple(_grow(data, ci, depth + 1, params, n_classes) for ci in children_idx)
    return Internal(predicate, children, majority)


def select_feature(data: LabeledMatrix, idx, n_classes: int) -> int | None:
    """Feature with the smallest Bonferroni-adjusted association p-value.

    The adjustment multiplies every p-value by the feature count, so it
    never moves the argmin; crucially it is applied without clipping at
    1, because clipping would tie all clearly-insignificant features
    and bias selection toward low indices on pure noise.
    """
    m = len(data.kinds)
    best_p = None
    best_f = None
    for f, kind in enumerate(data.kinds):
        if kind == CONTINUOUS:
            p = anova_p(data.X[idx, f], data.y[idx], n_classes)
        else:
            p = _chi2_p(data, idx, f, kind, n_classes)
        adjusted = p * m
        if best_p is None or adjusted < best_p:
            best_p = adjusted
            best_f = f
    return best_f


def anova_p(values: np.ndarray, y: np.ndarray, n_classes: int) -> float:
    """One-way ANOVA F-test p-value of values across class groups.

    All sums go through math.fsum, so the result is independent of row
    order.
    """
    n = len(values)
    groups = []
    for c in range(n_classes):
        vals = values[y == c]
        if len(vals) > 0:
            groups.append(vals.tolist())
    k = len(groups)
    if k < 2 or n - k < 1:
        return 1.0
    grand = math.fsum(values.tolist()) / n
    ssb = 0.0
    ssw = 0.0
    for vals in groups:
        m = math.fsum(vals) / len(vals)
        ssb += len(vals) * (m - grand) ** 2
        ssw += math.fsum((v - m) ** 2 for v in vals)
    df1 = k - 1
    df2 = n - k
    if ssw <= _VAR_TOL:
        return 0.0 if ssb > _VAR_TOL else 1.0
    f_stat = (ssb / df1) / (ssw / df2)
    return stats.f_sf(f_stat, df1, df2)


def _chi2_p(data, idx, f, n_codes, n_classes) -> float:
    col = np.ascontiguousarray(data.X[idx, f], dtype=np.float64)
    labels = np.ascontiguousarray(data.y[idx], dtype=np.int32)
    table = kernels.contingency(col, labels, n_codes, n_classes)
    live_rows = [[int(v) for v in row] for row in table if row.sum() > 0]
    if len(live_rows) < 2:
        return 1.0
    live_cols = [j for j in range(n_classes) if any(r[j] > 0 for r in live_rows)]
    if len(live_cols) < 2:
        return 1.0
    cleaned = [[r[j] for j in live_cols] for r in live_rows]
    _stat, _df, p = stats.chi_square(cleaned)
    return p


# --- split-point construction --------------------------------------------


def _continuous_split(data, idx, feature, counts, params):
    values = data.X[idx, feature]
    y = data.y[idx]
    stats_by_class = _class_means(values, y, len(counts))
    if len(stats_by_class) < 2:
        return None
    assign = _two_superclasses(stats_by_class, params.seed)
    if assign is None:
        return None
    side_a = {c for c, side in assign.items() if side == 0}
    mask_a = np.isin(y, sorted(side_a))
    cut = _discriminant_cut(values[mask_a], values[~mask_a])
    if cut is None:
        return None
    return Threshold(feature, cut)


def _nominal_split(data, idx, feature, n_codes, counts, params, n_classes):
    codes = data.X[idx, feature]
    y = data.y[idx]
    stats_by_class = _class_means(codes, y, n_classes)
    if len(stats_by_class) < 2:
        return None
    assign = _two_superclasses(stats_by_class, params.seed)
    if assign is None:
        return None
    side_a = {c for c, side in assign.items() if side == 0}
    in_a = np.isin(y, sorted(side_a))

    present = sorted(int(c) for c in set(codes.tolist()))
    if len(present) < 2:
        return None
    best_code = None
    best_share = -1.0
    for code in present:
        mask = codes == code
        share = int(np.count_nonzero(in_a & mask)) / int(np.count_nonzero(mask))
        if share > best_share:
            best_share = share
            best_code = code
    rest = [c for c in present if c != best_code]
    groups = (frozenset([best_code]), frozenset(rest))
    return NominalPartition(feature, groups)


def _class_means(values: np.ndarray, y: np.ndarray, n_classes: int):
    """Per-present-class (class, n, mean) with order-independent sums."""
    out = []
    for c in range(n_classes):
        vals = values[y == c]
        if len(vals) > 0:
            out.append((c, len(vals), math.fsum(vals.tolist()) / len(vals)))
    return out


def _two_superclasses(class_stats, seed: int):
    """2-means on class means; returns {class: 0 or 1} or None.

    Classes weighted by size. Initial centers are drawn with the given
    seed from the distinct mean values, so the grouping depends only on
    per-class aggregates, never on row order.
    """
    if len(class_stats) == 2:
        return {class_stats[0][0]: 0, class_stats[1][0]: 1}
    means = [m for _c, _n, m in class_stats]
    distinct = sorted(set(means))
    if len(distinct) < 2:
        return None
    rng = random.Random(seed)
    centers = sorted(rng.sample(distinct, 2))
    assign = [0] * len(class_stats)
    for _ in range(100):
        new_assign = []
        for _c, _n, m in class_stats:
            d0 = abs(m - centers[0])
            d1 = abs(m - centers[1])
            new_assign.append(0 if d0 <= d1 else 1)
        if 0 not in new_assign or 1 not in new_assign:
            # degenerate assignment: force the extreme mean into its own side
            lone = max(range(len(class_stats)), key=lambda i: (class_stats[i][2], -i))
            new_assign = [0] * len(class_stats)
            new_assign[lone] = 1
        if new_assign == assign:
            break
        assign = new_assign
        for side in (0, 1):
            w = [class_stats[i][1] for i in range(len(assign)) if assign[i] == side]
            v = [
                class_stats[i][1] * class_stats[i][2]
                for i in range(len(assign))
                if assign[i] == side
            ]
            centers[side] = math.fsum(v) / sum(w)
    return {class_stats[i][0]: assign[i] for i in range(len(class_stats))}


def _discriminant_cut(vals_a: np.ndarray, vals_b: np.ndarray):
    """Boundary between two univariate normal fits, priors included."""
    na, nb = len(vals_a), len(vals_b)
    if na == 0 or nb == 0:
        return None
    n = na + nb
    mu_a = math.fsum(vals_a.tolist()) / na
    mu_b = math.fsum(vals_b.tolist()) / nb
    var_a = math.fsum((v - mu_a) ** 2 for v in vals_a.tolist()) / na
    var_b = math.fsum((v - mu_b) ** 2 for v in vals_b.tolist()) / nb
    midpoint = 0.5 * (mu_a + mu_b)
    if mu_a == mu_b:
        return None
    if var_a < _VAR_TOL or var_b < _VAR_TOL:
        return midpoint
    pi_a, pi_b = na / n, nb / n

    a = 1.0 / (2.0 * var_b) - 1.0 / (2.0 * var_a)
    b = mu_a / var_a - mu_b / var_b
    c = (
        mu_b * mu_b / (2.0 * var_b)
        - mu_a * mu_a / (2.0 * var_a)
        + math.log(pi_a / pi_b)
        + 0.5 * math.log(var_b / var_a)
    )
    if abs(a) < _VAR_TOL:
        if abs(b) < _VAR_TOL:
            return midpoint
        return -c / b
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return midpoint
    sq = math.sqrt(disc)
    roots = [(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)]
    lo, hi = min(mu_a, mu_b), max(mu_a, mu_b)
    inside = [r for r in roots if lo <= r <= hi]
    if len(inside) == 1:
        return inside[0]
    if len(inside) == 2:
        return min(inside, key=lambda r: abs(r - midpoint))
    return midpoint
