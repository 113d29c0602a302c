"""Best responses, the Kelly equilibrium, and saddle-point verification."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.linalg import cho_solve

from .analytics import payoff_kernel
from .market import MarketParams, as_rule_weights

# Indifference detection: |(cov c)_i - (mu_i - r)| <= rtol * (1 + |mu_i - r|).
_INDIFFERENCE_RTOL = 1e-9
# Saddle margins within this of zero count as equality, not violation.
_SADDLE_TOL = 1e-10


class ResponseKind(str, Enum):
    FINITE = "finite"
    UNBOUNDED_ABOVE = "unbounded_above"
    UNBOUNDED_BELOW = "unbounded_below"
    INDIFFERENT = "indifferent"


@dataclass(frozen=True, eq=False)
class BestResponseReport:
    """Player 1's best response, reported per coordinate.

    Unbounded responses are flagged symbolically instead of with infinite
    sentinels. ``rule`` is set only when every coordinate is indifferent
    (then any rule is optimal and the Kelly rule is the canonical pick).
    """

    kinds: tuple[ResponseKind, ...]
    rule: np.ndarray | None = None

    @property
    def indifferent(self) -> bool:
        return all(k == ResponseKind.INDIFFERENT for k in self.kinds)


@dataclass(frozen=True, eq=False)
class GameSolution:
    """The unique pure-strategy Nash equilibrium: both players at the Kelly rule."""

    kelly: np.ndarray
    value_kernel: float = 0.0
    value_ratio: float = 1.0


def kelly_rule(m: MarketParams) -> np.ndarray:
    """Growth-optimal rule: the solution of cov b = mu - r1.

    Solved with the Cholesky factor computed at market build; no explicit
    inverse is ever formed.
    """
    return cho_solve((np.asarray(m.chol), True), m.excess)


def solve_game(m: MarketParams) -> GameSolution:
    """Equilibrium rule pair and game value (kernel 0, expected ratio 1)."""
    return GameSolution(kelly=kelly_rule(m))


def best_response_p1(m: MarketParams, c) -> BestResponseReport:
    """Player 1's best response to the denominator rule ``c``.

    Coordinate i is unbounded above when (cov c)_i < mu_i - r, unbounded
    below when greater, and indifferent when equal within tolerance. Only
    when every coordinate is indifferent is a concrete rule reported.
    """
    wc = as_rule_weights(m, c)
    lhs = m.cov @ wc
    rhs = m.excess
    kinds = []
    for i in range(m.n):
        tol = _INDIFFERENCE_RTOL * (1.0 + abs(rhs[i]))
        if abs(lhs[i] - rhs[i]) <= tol:
            kinds.append(ResponseKind.INDIFFERENT)
        elif lhs[i] < rhs[i]:
            kinds.append(ResponseKind.UNBOUNDED_ABOVE)
        else:
            kinds.append(ResponseKind.UNBOUNDED_BELOW)
    report = BestResponseReport(kinds=tuple(kinds))
    if report.indifferent:
        report = BestResponseReport(kinds=tuple(kinds), rule=kelly_rule(m))
    return report


def best_response_p2(m: MarketParams, b) -> np.ndarray:
    """Player 2's best response to ``b``: the midpoint of b and the Kelly rule."""
    return 0.5 * (as_rule_weights(m, b) + kelly_rule(m))


@dataclass(frozen=True, eq=False)
class SaddleViolation:
    side: str  # "upper" (kelly vs c) or "lower" (b vs kelly)
    probe: np.ndarray
    kernel: float


@dataclass(frozen=True, eq=False)
class SaddleReport:
    """Result of probing the saddle inequalities around the Kelly rule.

    ``upper_margin`` is the worst (smallest) kernel of (kelly, c) over the
    probes, required >= -tolerance; ``lower_margin`` is the worst (largest)
    kernel of (b, kelly), required <= tolerance.
    """

    kelly: np.ndarray
    upper_margin: float
    lower_margin: float
    n_probes: int
    tolerance: float
    violations: tuple[SaddleViolation, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return not self.violations


def verify_saddle(m: MarketParams, probes, tolerance: float = _SADDLE_TOL) -> SaddleReport:
    """Check payoff_kernel(kelly, c) >= 0 and payoff_kernel(b, kelly) <= 0 for every probe.

    Each probe rule is used on both sides. Failures are collected in the
    report rather than raised.
    """
    probe_list = [as_rule_weights(m, p) for p in probes]
    if not probe_list:
        raise ValueError("probes must be nonempty")
    kelly = kelly_rule(m)
    upper = float("inf")
    lower = float("-inf")
    violations = []
    for w in probe_list:
        up = payoff_kernel(m, kelly, w).kernel
        lo = payoff_kernel(m, w, kelly).kernel
        upper = min(upper, up)
        lower = max(lower, lo)
        if up < -tolerance:
            violations.append(SaddleViolation(side="upper", probe=w, kernel=up))
        if lo > tolerance:
            violations.append(SaddleViolation(side="lower", probe=w, kernel=lo))
    return SaddleReport(
        kelly=kelly,
        upper_margin=upper,
        lower_margin=lower,
        n_probes=len(probe_list),
        tolerance=tolerance,
        violations=tuple(violations),
    )
