"""Pure-Python split-scan kernels.

Drop-in replacements for the compiled module. Operation order matches
``_speedups.pyx`` line for line so both backends produce bit-identical
scores, cuts and therefore trees; the compiled path is just faster.
Candidate cuts sit at midpoints between adjacent distinct values, and
class counts are accumulated per run of equal values, which makes every
result independent of how ties were ordered by the caller's sort.
"""

from __future__ import annotations

import math

import numpy as np


def best_threshold_gini(values, y, n_classes):
    """Best binary threshold by Gini impurity decrease.

    ``values`` sorted ascending with ``y`` aligned. Returns
    ``(decrease, cut)`` or ``None`` when all values are equal; ties on
    the decrease keep the lowest cut.
    """
    vals = values.tolist()
    ys = y.tolist()
    n = len(vals)
    total = [0] * n_classes
    for c in ys:
        total[c] += 1

    s = 0.0
    for c in range(n_classes):
        p = total[c] / n
        s += p * p
    parent = 1.0 - s

    left = [0] * n_classes
    nl = 0
    best_dec = 0.0
    best_cut = 0.0
    found = False
    i = 0
    while i < n - 1:
        v = vals[i]
        j = i
        while j < n and vals[j] == v:
            left[ys[j]] += 1
            nl += 1
            j += 1
        if j >= n:
            break
        nr = n - nl
        sl = 0.0
        sr = 0.0
        for c in range(n_classes):
            p = left[c] / nl
            sl += p * p
            p = (total[c] - left[c]) / nr
            sr += p * p
        weighted = (nl / n) * (1.0 - sl) + (nr / n) * (1.0 - sr)
        dec = parent - weighted
        if not found or dec > best_dec:
            found = True
            best_dec = dec
            best_cut = (v + vals[j]) * 0.5
        i = j
    if not found:
        return None
    return best_dec, best_cut


def best_threshold_gain_ratio(values, y, n_classes):
    """Best binary threshold by gain ratio among positive-gain cuts.

    Returns ``(ratio, gain, cut)`` or ``None`` when no cut has positive
    information gain. Ties on the ratio keep the lowest cut.
    """
    vals = values.tolist()
    ys = y.tolist()
    n = len(vals)
    total = [0] * n_classes
    for c in ys:
        total[c] += 1

    parent = 0.0
    for c in range(n_classes):
        if total[c] > 0:
            p = total[c] / n
            parent -= p * math.log2(p)

    left = [0] * n_classes
    nl = 0
    best_ratio = 0.0
    best_gain = 0.0
    best_cut = 0.0
    found = False
    i = 0
    while i < n - 1:
        v = vals[i]
        j = i
        while j < n and vals[j] == v:
            left[ys[j]] += 1
            nl += 1
            j += 1
        if j >= n:
            break
        nr = n - nl
        hl = 0.0
        hr = 0.0
        for c in range(n_classes):
            if left[c] > 0:
                p = left[c] / nl
                hl -= p * math.log2(p)
            r = total[c] - left[c]
            if r > 0:
                p = r / nr
                hr -= p * math.log2(p)
        wl = nl / n
        wr = nr / n
        gain = parent - wl * hl - wr * hr
        if gain > 1e-12:
            split_info = -wl * math.log2(wl) - wr * math.log2(wr)
            ratio = gain / split_info
            if not found or ratio > best_ratio:
                found = True
                best_ratio = ratio
                best_gain = gain
                best_cut = (v + vals[j]) * 0.5
        i = j
    if not found:
        return None
    return best_ratio, best_gain, best_cut


def best_threshold_gain(values, y, n_classes):
    """Best binary threshold by raw information gain.

    Returns ``(gain, cut)`` or ``None`` when all values are equal.
    """
    vals = values.tolist()
    ys = y.tolist()
    n = len(vals)
    total = [0] * n_classes
    for c in ys:
        total[c] += 1

    parent = 0.0
    for c in range(n_classes):
        if total[c] > 0:
            p = total[c] / n
            parent -= p * math.log2(p)

    left = [0] * n_classes
    nl = 0
    best_gain = 0.0
    best_cut = 0.0
    found = False
    i = 0
    while i < n - 1:
        v = vals[i]
        j = i
        while j < n and vals[j] == v:
            left[ys[j]] += 1
            nl += 1
            j += 1
        if j >= n:
            break
        nr = n - nl
        hl = 0.0
        hr = 0.0
        for c in range(n_classes):
            if left[c] > 0:
                p = left[c] / nl
                hl -= p * math.log2(p)
            r = total[c] - left[c]
            if r > 0:
                p = r / nr
                hr -= p * math.log2(p)
        gain = parent - (nl / n) * hl - (nr / n) * hr
        if not found or gain > best_gain:
            found = True
            best_gain = gain
            best_cut = (v + vals[j]) * 0.5
        i = j
    if not found:
        return None
    return best_gain, best_cut


def contingency(codes, y, n_codes, n_classes):
    """Code x class count table as an int64 array."""
    table = np.zeros((n_codes, n_classes), dtype=np.int64)
    cs = codes.tolist()
    ys = y.tolist()
    for i in range(len(cs)):
        table[int(cs[i]), ys[i]] += 1
    return table
