"""Split statistics shared by the four learners.

Count vectors go in; bits, impurities and p-values come out. The
chi-square and F tails are computed here from scratch (regularized
incomplete gamma / beta, Lentz continued fractions) so the package
carries no statistics dependency. Both tails are accurate to better
than six significant digits for the degrees of freedom trees produce
(df <= 100 checked against published tables).
"""

from __future__ import annotations

import math

_MAX_ITER = 500
_EPS = 1e-15
_TINY = 1e-300


def entropy(counts) -> float:
    """Shannon entropy in bits of a class-count vector."""
    total = _checked_total(counts)
    h = 0.0
    for c in counts:
        if c > 0:
            p = c / total
            h -= p * math.log2(p)
    return h


def gini(counts) -> float:
    """Gini impurity 1 - sum(p_i^2) of a class-count vector."""
    total = _checked_total(counts)
    s = 0.0
    for c in counts:
        p = c / total
        s += p * p
    return 1.0 - s


def gain_ratio(parent_counts, child_counts) -> float:
    """Information gain of a split divided by its split information.

    ``child_counts`` is one count vector per child; the children must
    partition the parent. Returns 0.0 when the split information is 0
    (all rows in one child).
    """
    total = _checked_total(parent_counts)
    sums = [sum(cc) for cc in child_counts]
    per_class = [sum(cc[i] for cc in child_counts) for i in range(len(parent_counts))]
    if per_class != list(parent_counts):
        raise ValueError("child counts do not partition the parent counts")
    gain = entropy(parent_counts)
    split_info = 0.0
    for cc, n in zip(child_counts, sums):
        if n > 0:
            w = n / total
            gain -= w * entropy(cc)
            split_info -= w * math.log2(w)
    if split_info <= 0.0:
        return 0.0
    return gain / split_info


def chi_square(table):
    """Pearson chi-square test of association on a contingency table.

    ``table`` is rows x columns of non-negative counts. Returns
    ``(statistic, degrees_of_freedom, p_value)``. Requires at least two
    rows and two columns with nonzero marginals.
    """
    if not table or not table[0]:
        raise ValueError("empty contingency table")
    n_cols = len(table[0])
    if any(len(row) != n_cols for row in table):
        raise ValueError("ragged contingency table")
    if any(c < 0 for row in table for c in row):
        raise ValueError("negative count in contingency table")
    row_sums = [sum(row) for row in table]
    col_sums = [sum(row[j] for row in table) for j in range(n_cols)]
    total = sum(row_sums)
    if total <= 0:
        raise ValueError("contingency table sums to zero")
    live_rows = sum(1 for s in row_sums if s > 0)
    live_cols = sum(1 for s in col_sums if s > 0)
    if live_rows < 2 or live_cols < 2:
        raise ValueError("degenerate marginals: need >= 2 nonzero rows and columns")

    stat = 0.0
    for i, row in enumerate(table):
        if row_sums[i] == 0:
            continue
        for j, obs in enumerate(row):
            if col_sums[j] == 0:
                continue
            exp = row_sums[i] * col_sums[j] / total
            d = obs - exp
            stat += d * d / exp
    df = (live_rows - 1) * (live_cols - 1)
    return stat, df, chi2_sf(stat, df)


def chi2_sf(x: float, df: int) -> float:
    """Survival function of the chi-square distribution."""
    if df < 1:
        raise ValueError("df must be >= 1")
    if x <= 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    return _gamma_q(0.5 * df, 0.5 * x)


def f_sf(f: float, df1: int, df2: int) -> float:
    """Survival function of the F distribution with df1/df2 dof."""
    if df1 < 1 or df2 < 1:
        raise ValueError("degrees of freedom must be >= 1")
    if f <= 0.0:
        return 1.0
    if math.isinf(f):
        return 0.0
    return betainc_reg(0.5 * df2, 0.5 * df1, df2 / (df2 + df1 * f))


# --- regularized incomplete gamma --------------------------------------

def _gamma_p_series(a: float, x: float) -> float:
    # lower tail by power series, converges fast for x < a + 1
    term = 1.0 / a
    total = term
    denom = a
    for _ in range(_MAX_ITER):
        denom += 1.0
        term *= x / denom
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_q_cf(a: float, x: float) -> float:
    # upper tail by Lentz continued fraction, for x >= a + 1
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_q(a: float, x: float) -> float:
    if x < a + 1.0:
        return min(1.0, max(0.0, 1.0 - _gamma_p_series(a, x)))
    return min(1.0, max(0.0, _gamma_q_cf(a, x)))


# --- regularized incomplete beta ----------------------------------------

def _beta_cf(a: float, b: float, x: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h


def betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return min(1.0, max(0.0, front * _beta_cf(a, b, x) / a))
    return min(1.0, max(0.0, 1.0 - front * _beta_cf(b, a, 1.0 - x) / b))


def binom_upper(errors: int, n: int, cf: float) -> float:
    """Upper confidence bound on a binomial error rate.

    Smallest rate p with P(X <= errors | n, p) <= cf (Clopper-Pearson
    style); the pessimistic-error estimate used when pruning.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    if errors >= n:
        return 1.0
    if errors < 0:
        raise ValueError("errors must be >= 0")
    # P(X <= e; n, p) = I_{1-p}(n - e, e + 1), decreasing in p
    lo = errors / n
    hi = 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if betainc_reg(n - errors, errors + 1.0, 1.0 - mid) > cf:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12:
            break
    return hi


def _checked_total(counts):
    total = 0
    for c in counts:
        if c < 0:
            raise ValueError("negative class count")
        total += c
    if total <= 0:
        raise ValueError("class counts sum to zero")
    return total
