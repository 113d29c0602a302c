"""Closed-form engine: log-wealth laws, payoff kernel, growth rate, win probability.

Everything here is evaluated in closed form, never by simulation; the
Monte Carlo module is tested against these values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .market import MarketParams, as_rule_weights


def norm_cdf(x: float) -> float:
    """Standard normal CDF, N(x) = erfc(-x / sqrt(2)) / 2.

    ``math.erfc`` is the platform C implementation of the complementary
    error function (correctly rounded to double precision), so the absolute
    error is far below 1e-12 everywhere.
    """
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


@dataclass(frozen=True)
class LogWealthLaw:
    """Normal law of a log-wealth process: log V_t ~ N(mean_rate*t, variance_rate*t)."""

    mean_rate: float
    variance_rate: float

    def mean(self, t: float) -> float:
        return self.mean_rate * t

    def variance(self, t: float) -> float:
        return self.variance_rate * t

    def std(self, t: float) -> float:
        return math.sqrt(self.variance(t))


@dataclass(frozen=True)
class PayoffValue:
    """Exponential growth rate of the expected wealth ratio E[V_t(b) / V_t(c)]."""

    kernel: float

    def ratio_at_t(self, t: float) -> float:
        """Expected wealth ratio at horizon t, exp(kernel * t)."""
        return math.exp(self.kernel * t)


def log_wealth_law(m: MarketParams, b) -> LogWealthLaw:
    """Law of log V_t under rule ``b``: drift r + (mu - r1)'b - b'cov b / 2, variance rate b'cov b."""
    w = as_rule_weights(m, b)
    quad = float(w @ m.cov @ w)
    return LogWealthLaw(mean_rate=m.r + float(m.excess @ w) - quad / 2.0, variance_rate=quad)


def growth_rate(m: MarketParams, b) -> float:
    """Asymptotic continuously-compounded growth rate of rule ``b``.

    Identical to ``log_wealth_law(m, b).mean_rate``; exposed under its own
    name because it is the quantity the Kelly rule maximizes.
    """
    return log_wealth_law(m, b).mean_rate


def payoff_kernel(m: MarketParams, b, c) -> PayoffValue:
    """Payoff kernel (mu - r1 - cov c)'(b - c) of the expected-wealth-ratio game."""
    wb = as_rule_weights(m, b)
    wc = as_rule_weights(m, c)
    return PayoffValue(kernel=float((m.excess - m.cov @ wc) @ (wb - wc)))


def log_ratio_law(m: MarketParams, b, c) -> LogWealthLaw:
    """Law of log(V_t(b) / V_t(c)): the two wealths are driven by the same Brownian motions.

    Drift rate (mu - r1)'(b - c) + (c'cov c - b'cov b)/2, variance rate (b - c)'cov(b - c).
    """
    wb = as_rule_weights(m, b)
    wc = as_rule_weights(m, c)
    d = wb - wc
    drift = float(m.excess @ d) + (float(wc @ m.cov @ wc) - float(wb @ m.cov @ wb)) / 2.0
    return LogWealthLaw(mean_rate=drift, variance_rate=float(d @ m.cov @ d))


def win_probability(m: MarketParams, b, c, t: float) -> float:
    """P{V_t(b) >= V_t(c)} for two rules driven by the same noise.

    The log ratio is normal, so this is N(d / s) with d its mean and s its
    standard deviation at t. When the ratio is degenerate at 1 (t = 0 or
    b = c) the tie counts as a win and the probability is 1.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    law = log_ratio_law(m, b, c)
    spread = law.variance(t)
    if spread == 0.0:
        return 1.0
    return norm_cdf(law.mean(t) / math.sqrt(spread))
