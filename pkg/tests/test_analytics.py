import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.stats import norm

from kellygame import (
    DimensionMismatch,
    growth_rate,
    log_ratio_law,
    log_wealth_law,
    norm_cdf,
    payoff_kernel,
    win_probability,
)

from conftest import HALF_GROWTH, HALF_VARIANCE, KERNEL_HALF_VS_ONE, MU, SIGMA, SIGMA2

finite_rules = st.floats(-3.0, 3.0)


def test_norm_cdf_against_scipy():
    xs = np.linspace(-8.0, 8.0, 321)
    ours = np.array([norm_cdf(x) for x in xs])
    theirs = norm.cdf(xs)
    assert np.max(np.abs(ours - theirs)) < 1e-13
    assert norm_cdf(0.0) == 0.5


# ---------------------------------------------------------------------------
# log-wealth law and growth rate


def test_half_stock_law(shannon):
    law = log_wealth_law(shannon, [0.5])
    assert law.mean_rate == pytest.approx(HALF_GROWTH, abs=1e-15)
    assert law.mean_rate == pytest.approx(0.06, abs=1e-3)
    assert law.variance_rate == pytest.approx(HALF_VARIANCE, abs=1e-15)
    assert math.sqrt(law.variance_rate) == pytest.approx(0.3465, abs=1e-4)


def test_all_bond_law(shannon, two_asset):
    for m in (shannon, two_asset):
        law = log_wealth_law(m, [0.0] * m.n)
        assert law.mean_rate == m.r
        assert law.variance_rate == 0.0


def test_buy_and_hold_shannon(shannon):
    law = log_wealth_law(shannon, [1.0])
    # drift mu - sigma^2/2 vanishes by construction of the scenario
    assert abs(law.mean_rate) < 1e-16
    assert law.variance_rate == pytest.approx(SIGMA2, abs=1e-15)
    assert math.sqrt(law.variance_rate) == pytest.approx(0.693, abs=1e-3)


def test_growth_rate_equals_mean_rate(shannon, two_asset):
    for m, b in ((shannon, [0.7]), (two_asset, [0.3, -0.4])):
        assert growth_rate(m, b) == log_wealth_law(m, b).mean_rate


def test_growth_rate_grid_maximum(shannon):
    # brute-force oracle: the half-stock rule maximizes the growth rate
    grid = np.arange(-2.0, 2.0 + 5e-5, 1e-4)
    rates = MU * grid - SIGMA2 * grid**2 / 2.0
    best = grid[np.argmax(rates)]
    assert abs(best - 0.5) <= 1e-4
    assert growth_rate(shannon, [0.5]) >= rates.max() - 1e-12


def test_law_dimension_mismatch(two_asset):
    with pytest.raises(DimensionMismatch):
        log_wealth_law(two_asset, [0.5])


# ---------------------------------------------------------------------------
# payoff kernel


def test_kernel_half_vs_one(shannon):
    value = payoff_kernel(shannon, [0.5], [1.0])
    assert value.kernel == pytest.approx(KERNEL_HALF_VS_ONE, abs=1e-15)
    assert value.kernel == pytest.approx(0.12, abs=1e-3)
    assert value.ratio_at_t(1.0) == pytest.approx(math.exp(0.12), abs=2e-4)
    assert value.ratio_at_t(0.0) == 1.0


def test_kernel_identical_rules(shannon, two_asset):
    for m, b in ((shannon, [0.8]), (shannon, [-1.3]), (two_asset, [0.2, 1.5])):
        value = payoff_kernel(m, b, b)
        assert value.kernel == 0.0
        assert value.ratio_at_t(37.0) == 1.0


def test_kernel_against_quadrature_oracle(two_asset):
    # independent route: integrate the lognormal ratio expectation from the
    # raw normal law of the log ratio, assembled with plain vector arithmetic
    b = np.array([1.0, 0.0])
    c = np.array([0.0, 1.0])
    cov = np.asarray(two_asset.cov)
    excess = np.array([0.06 - 0.02, 0.1 - 0.02])
    d_rate = float(excess @ (b - c)) + (float(c @ cov @ c) - float(b @ cov @ b)) / 2.0
    s2_rate = float((b - c) @ cov @ (b - c))

    def integrand(x):
        return math.exp(x) * math.exp(-((x - d_rate) ** 2) / (2.0 * s2_rate)) / math.sqrt(
            2.0 * math.pi * s2_rate
        )

    width = 14.0 * math.sqrt(s2_rate)
    expected, err = quad(integrand, d_rate - width, d_rate + width)
    assert err < 1e-9
    value = payoff_kernel(two_asset, b, c)
    assert value.ratio_at_t(1.0) == pytest.approx(expected, rel=1e-9)
    assert value.kernel == pytest.approx(math.log(expected), abs=1e-9)
    assert value.kernel == pytest.approx(0.026, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(b1=finite_rules, b2=finite_rules, c=finite_rules, alpha=st.floats(0.0, 1.0))
def test_kernel_affine_in_b(shannon, b1, b2, c, alpha):
    k1 = payoff_kernel(shannon, [b1], [c]).kernel
    k2 = payoff_kernel(shannon, [b2], [c]).kernel
    mix = payoff_kernel(shannon, [alpha * b1 + (1 - alpha) * b2], [c]).kernel
    assert mix == pytest.approx(alpha * k1 + (1 - alpha) * k2, abs=1e-12)


def test_kernel_hessian_in_c_by_finite_differences(two_asset):
    # quadratic in c with Hessian +2 cov: the kernel opens upward in c, which
    # is what makes Player 2's best response a finite minimizer
    b = np.array([0.4, -0.2])
    c0 = np.array([0.7, 0.1])
    h = 1e-4

    def k(c):
        return payoff_kernel(two_asset, b, c).kernel

    for i in range(2):
        for j in range(2):
            ei = np.eye(2)[i] * h
            ej = np.eye(2)[j] * h
            second = (k(c0 + ei + ej) - k(c0 + ei - ej) - k(c0 - ei + ej) + k(c0 - ei - ej)) / (
                4 * h * h
            )
            assert second == pytest.approx(2.0 * two_asset.cov[i, j], rel=1e-6, abs=1e-8)


@settings(max_examples=60, deadline=None)
@given(b=finite_rules, c=finite_rules, t=st.floats(0.01, 20.0))
def test_kernel_consistent_with_ratio_law(shannon, b, c, t):
    # E[ratio] from the log-ratio normal law must equal exp(kernel * t)
    law = log_ratio_law(shannon, [b], [c])
    expected = math.exp(law.mean(t) + law.variance(t) / 2.0)
    assert payoff_kernel(shannon, [b], [c]).ratio_at_t(t) == pytest.approx(expected, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(b=finite_rules, c=finite_rules)
def test_univariate_kernel_reduction(shannon, b, c):
    expected = (MU - 0.0 - SIGMA2 * c) * (b - c)
    assert payoff_kernel(shannon, [b], [c]).kernel == expected


# ---------------------------------------------------------------------------
# win probability


def test_win_probability_reference_values(shannon):
    p50 = win_probability(shannon, [0.5], [1.0], 50.0)
    p100 = win_probability(shannon, [0.5], [1.0], 100.0)
    assert p50 == pytest.approx(0.8898, abs=2e-3)
    assert p100 == pytest.approx(0.9585, abs=2e-3)
    # the standardized drift is (ln 2 / 4) sqrt(t)
    assert p50 == pytest.approx(norm_cdf(SIGMA / 4.0 * math.sqrt(50.0)), abs=1e-15)
    assert p100 == pytest.approx(norm_cdf(SIGMA / 4.0 * math.sqrt(100.0)), abs=1e-15)
    assert p50 == pytest.approx(0.89, abs=5e-3)
    assert p100 == pytest.approx(0.96, abs=5e-3)


def test_win_probability_ties_count_as_wins(shannon, two_asset):
    for t in (0.0, 1.0, 100.0):
        assert win_probability(shannon, [0.7], [0.7], t) == 1.0
        assert win_probability(two_asset, [0.3, 0.4], [0.3, 0.4], t) == 1.0
    assert win_probability(shannon, [0.5], [1.0], 0.0) == 1.0


def test_win_probability_rejects_negative_time(shannon):
    with pytest.raises(ValueError):
        win_probability(shannon, [0.5], [1.0], -1.0)


def test_win_probability_monotone_when_drift_positive(shannon):
    # d > 0 for the half-stock rule against buy-and-hold
    times = np.linspace(0.5, 200.0, 64)
    probs = [win_probability(shannon, [0.5], [1.0], t) for t in times]
    assert all(a < b for a, b in zip(probs, probs[1:]))


def test_win_probability_symmetric_complement(shannon):
    # swapping the players sends d to -d with the same spread
    t = 13.0
    p = win_probability(shannon, [0.5], [1.0], t)
    q = win_probability(shannon, [1.0], [0.5], t)
    assert p + q == pytest.approx(1.0, abs=1e-12)


def test_log_ratio_law_shannon(shannon):
    law = log_ratio_law(shannon, [0.5], [1.0])
    assert law.mean_rate == pytest.approx(HALF_GROWTH, abs=1e-15)
    assert law.variance_rate == pytest.approx(HALF_VARIANCE, abs=1e-15)
    assert law.std(4.0) == pytest.approx(2.0 * math.sqrt(HALF_VARIANCE), abs=1e-15)
