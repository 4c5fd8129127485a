import math
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from treeids.trees import stats

mp.mp.dps = 40


def test_entropy_uniform_binary():
    assert stats.entropy([5, 5]) == 1.0


def test_entropy_pure():
    assert stats.entropy([10, 0]) == 0.0


def test_entropy_nine_five():
    assert stats.entropy([9, 5]) == pytest.approx(0.940286, abs=1e-6)


def test_entropy_rejects_zero_total():
    with pytest.raises(ValueError):
        stats.entropy([0, 0])
    with pytest.raises(ValueError):
        stats.entropy([3, -1])


def test_gini_uniform_binary():
    assert stats.gini([5, 5]) == 0.5


def test_gini_pure():
    assert stats.gini([10, 0]) == 0.0


def test_gini_uniform_four_class():
    assert stats.gini([1, 1, 1, 1]) == 0.75


def test_gain_ratio_nine_five_split():
    ratio = stats.gain_ratio([9, 5], [[6, 2], [3, 3]])
    assert ratio == pytest.approx(0.04885, abs=1e-5)


def test_gain_ratio_empty_child_is_zero():
    assert stats.gain_ratio([9, 5], [[9, 5], [0, 0]]) == 0.0


def test_gain_ratio_perfect_split():
    assert stats.gain_ratio([5, 5], [[5, 0], [0, 5]]) == pytest.approx(1.0)


def test_gain_ratio_rejects_non_partition():
    with pytest.raises(ValueError):
        stats.gain_ratio([9, 5], [[6, 2], [2, 3]])


def test_chi_square_hand_computed():
    stat, df, _p = stats.chi_square([[10, 20], [20, 10]])
    assert df == 1
    assert stat == pytest.approx(20 / 3, rel=1e-12)


def test_chi_square_independent_table_is_zero():
    stat, _df, p = stats.chi_square([[10, 20], [20, 40]])
    assert stat == pytest.approx(0.0, abs=1e-12)
    assert p == 1.0


def test_chi_square_published_critical_values():
    # 5% and 1% critical values from standard chi-square tables
    for stat, df, alpha in [(3.841, 1, 0.05), (5.991, 2, 0.05), (9.488, 4, 0.05),
                            (18.307, 10, 0.05), (6.635, 1, 0.01)]:
        assert stats.chi2_sf(stat, df) == pytest.approx(alpha, abs=1e-4)


def test_chi_square_rejects_degenerate_marginals():
    with pytest.raises(ValueError):
        stats.chi_square([[5, 5], [0, 0]])
    with pytest.raises(ValueError):
        stats.chi_square([[5, 0], [7, 0]])


def test_chi2_sf_matches_mpmath_to_six_digits():
    for df in (1, 2, 3, 5, 10, 30, 100):
        for x in (0.1, 0.5, 1.0, 2.5, df * 0.8, df * 1.0, df * 2.0, df * 4.0):
            want = float(mp.gammainc(df / 2, x / 2, mp.inf, regularized=True))
            got = stats.chi2_sf(x, df)
            assert got == pytest.approx(want, rel=1e-9, abs=1e-300)


def test_f_sf_matches_mpmath_to_six_digits():
    for d1, d2 in [(1, 1), (2, 10), (5, 10), (3, 25), (10, 100), (21, 60)]:
        for f in (0.1, 0.5, 1.0, 2.0, 3.33, 10.0):
            x = d2 / (d2 + d1 * f)
            want = float(mp.betainc(d2 / 2, d1 / 2, 0, x, regularized=True))
            assert stats.f_sf(f, d1, d2) == pytest.approx(want, rel=1e-8)


def test_f_sf_published_five_percent_point():
    # F table: upper 5% point for (5, 10) dof is 3.33
    assert stats.f_sf(3.33, 5, 10) == pytest.approx(0.05, abs=2e-4)


def test_binom_upper_closed_form_zero_errors():
    # zero errors: (1 - p)^n = cf exactly
    for n in (1, 5, 10, 40):
        want = 1.0 - 0.25 ** (1.0 / n)
        assert stats.binom_upper(0, n, 0.25) == pytest.approx(want, abs=1e-9)


def test_binom_upper_saturates_at_one():
    assert stats.binom_upper(7, 7, 0.25) == 1.0


def test_binom_upper_monotone_in_errors():
    bounds = [stats.binom_upper(e, 20, 0.25) for e in range(20)]
    assert bounds == sorted(bounds)


@given(st.lists(st.integers(min_value=0, max_value=500), min_size=1, max_size=8))
def test_entropy_and_gini_bounds(counts):
    if sum(counts) == 0:
        return
    k = len(counts)
    h = stats.entropy(counts)
    g = stats.gini(counts)
    assert -1e-12 <= h <= math.log2(k) + 1e-12
    assert -1e-12 <= g <= 1 - 1 / k + 1e-12


@given(st.integers(min_value=1, max_value=6), st.integers(min_value=1, max_value=400))
def test_entropy_max_at_uniform_zero_at_pure(k, n):
    assert stats.entropy([n] * k) == pytest.approx(math.log2(k), abs=1e-12)
    pure = [0] * k + [n]
    assert stats.entropy(pure) == 0.0
    assert stats.gini([n] * k) == pytest.approx(1 - 1 / k, abs=1e-12)
    assert stats.gini(pure) == 0.0


@given(
    st.lists(
        st.lists(st.integers(min_value=0, max_value=60), min_size=2, max_size=4),
        min_size=2,
        max_size=4,
    )
)
def test_chi_square_nonnegative_and_zero_iff_independent(table):
    width = len(table[0])
    if any(len(r) != width for r in table):
        return
    rows = [r for r in table if sum(r)]
    cols_ok = sum(1 for j in range(width) if any(r[j] for r in rows)) >= 2
    if len(rows) < 2 or not cols_ok:
        return
    stat, _df, p = stats.chi_square(table)
    assert stat >= 0.0
    # exact independence check in rationals
    row_sums = [sum(r) for r in table]
    col_sums = [sum(r[j] for r in table) for j in range(width)]
    total = sum(row_sums)
    independent = all(
        Fraction(table[i][j]) == Fraction(row_sums[i] * col_sums[j], total)
        for i in range(len(table))
        for j in range(width)
    )
    if independent:
        assert stat == pytest.approx(0.0, abs=1e-9)
        assert p == 1.0
    else:
        assert stat > 0.0
