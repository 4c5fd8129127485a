"""Backend equivalence and oracle checks for the split-scan kernels."""

import math
from fractions import Fraction

import numpy as np
import pytest

from treeids.trees.kernels import _fallback

try:
    from treeids.trees.kernels import _speedups
except ImportError:
    _speedups = None

BACKENDS = [_fallback] + ([_speedups] if _speedups is not None else [])


def _random_case(rng, max_n=60, max_k=5):
    n = int(rng.integers(2, max_n))
    k = int(rng.integers(2, max_k))
    vals = np.sort(np.round(rng.normal(size=n), 2)).astype(np.float64)
    y = rng.integers(0, k, size=n).astype(np.int32)
    return vals, y, k


@pytest.mark.skipif(_speedups is None, reason="compiled kernels not built")
def test_compiled_and_fallback_identical():
    rng = np.random.default_rng(5)
    for _ in range(400):
        vals, y, k = _random_case(rng)
        for fn in ("best_threshold_gini", "best_threshold_gain_ratio", "best_threshold_gain"):
            a = getattr(_speedups, fn)(vals, y, k)
            b = getattr(_fallback, fn)(vals, y, k)
            assert a == b, fn  # bit-identical, not approximately equal
        codes = rng.integers(0, 4, size=len(vals)).astype(np.float64)
        ta = _speedups.contingency(codes, y, 4, k)
        tb = _fallback.contingency(codes, y, 4, k)
        assert (ta == tb).all()


def _exact_best_gini(vals, y, k):
    """All-cuts exhaustive Gini-decrease search in exact rationals."""
    n = len(vals)
    total = [0] * k
    for c in y:
        total[c] += 1

    def gini_fr(counts, m):
        return 1 - sum(Fraction(c, m) ** 2 for c in counts)

    parent = gini_fr(total, n)
    best = None
    distinct = sorted(set(vals.tolist()))
    for lo, hi in zip(distinct, distinct[1:]):
        cut = (lo + hi) / 2.0
        left = [0] * k
        nl = 0
        for v, c in zip(vals.tolist(), y.tolist()):
            if v <= cut:
                left[c] += 1
                nl += 1
        right = [t - l for t, l in zip(total, left)]
        dec = parent - Fraction(nl, n) * gini_fr(left, nl) - Fraction(n - nl, n) * gini_fr(
            right, n - nl
        )
        if best is None or dec > best:
            best = dec
    return best


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_gini_kernel_matches_exact_search(impl):
    rng = np.random.default_rng(17)
    for _ in range(60):
        vals, y, k = _random_case(rng, max_n=30, max_k=4)
        res = impl.best_threshold_gini(vals, y, k)
        exact = _exact_best_gini(vals, y, k)
        if exact is None:
            assert res is None
            continue
        dec, cut = res
        # the kernel's chosen cut must realize the exact optimum
        left = [0] * k
        nl = 0
        total = [0] * k
        for v, c in zip(vals.tolist(), y.tolist()):
            total[c] += 1
            if v <= cut:
                left[c] += 1
                nl += 1
        n = len(vals)

        def gini_fr(counts, m):
            return 1 - sum(Fraction(c, m) ** 2 for c in counts)

        realized = (
            gini_fr(total, n)
            - Fraction(nl, n) * gini_fr(left, nl)
            - Fraction(n - nl, n) * gini_fr([t - l for t, l in zip(total, left)], n - nl)
        )
        assert realized == exact
        assert dec == pytest.approx(float(exact), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_gain_ratio_kernel_against_direct_formula(impl):
    rng = np.random.default_rng(23)
    for _ in range(60):
        vals, y, k = _random_case(rng, max_n=30, max_k=4)
        res = impl.best_threshold_gain_ratio(vals, y, k)
        if res is None:
            continue
        ratio, gain, cut = res
        n = len(vals)
        total = [0] * k
        left = [0] * k
        nl = 0
        for v, c in zip(vals.tolist(), y.tolist()):
            total[c] += 1
            if v <= cut:
                left[c] += 1
                nl += 1
        right = [t - l for t, l in zip(total, left)]

        def h(counts):
            m = sum(counts)
            return -sum(c / m * math.log2(c / m) for c in counts if c)

        want_gain = h(total) - nl / n * h(left) - (n - nl) / n * h(right)
        wl, wr = nl / n, (n - nl) / n
        want_ratio = want_gain / (-wl * math.log2(wl) - wr * math.log2(wr))
        assert gain == pytest.approx(want_gain, rel=1e-10, abs=1e-12)
        assert ratio == pytest.approx(want_ratio, rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_single_valued_column_has_no_cut(impl):
    vals = np.full(10, 3.5)
    y = np.array([0, 1] * 5, dtype=np.int32)
    assert impl.best_threshold_gini(vals, y, 2) is None
    assert impl.best_threshold_gain_ratio(vals, y, 2) is None
    assert impl.best_threshold_gain(vals, y, 2) is None


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_contingency_counts(impl):
    codes = np.array([0.0, 1.0, 1.0, 2.0, 0.0])
    y = np.array([0, 1, 1, 0, 1], dtype=np.int32)
    table = impl.contingency(codes, y, 4, 2)
    assert table.tolist() == [[1, 1], [0, 2], [1, 0], [0, 0]]
