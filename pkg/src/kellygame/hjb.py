"""Finite-difference residual checks for the dynamic-programming PDE of the game.

The single-stock game has state (S, t, M1, M2): stock price, time, and the
two players' wealths. For a candidate value function J, the controlled
generator plus the time derivative must vanish along an optimal pair of
controls. This module evaluates that residual numerically for arbitrary
candidates (it verifies candidate solutions, it does not solve the PDE)
and checks that the wealth-ratio candidate J = M1/M2 makes the Kelly
controls mutual best responses.

Derivatives use central differences with relative step h * (1 + |coord|);
the default h = 1e-3 leaves O(h^2) ~ 1e-6 of truncation headroom, which is
the tolerance used for identity assertions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatch, DomainViolation
from .market import MarketParams
from .solver import kelly_rule

DEFAULT_STEP = 1e-3
DEFAULT_TOL = 1e-6
# Step for identity verification sweeps. At h = 1e-3 the truncation constant
# of the cross-derivative stencil reaches ~2.4e-6 for |controls| ~ 2.5, over
# the 1e-6 identity tolerance; h = 2.5e-4 leaves ~1.5e-7 worst case while
# staying far above the second-difference rounding floor (~4e-10).
VERIFY_STEP = 2.5e-4


@dataclass(frozen=True)
class StatePoint:
    """State (S, t, M1, M2): price, time, numerator wealth, denominator wealth."""

    s: float
    t: float
    m1: float
    m2: float

    def __post_init__(self):
        if self.s <= 0 or self.m1 <= 0 or self.m2 <= 0:
            raise ValueError(f"S, M1, M2 must be strictly positive, got {self}")
        if self.t < 0:
            raise ValueError(f"t must be >= 0, got {self.t}")


@dataclass(frozen=True)
class CandidateValueFn:
    """A scalar candidate value function of the state."""

    name: str
    fn: Callable[[float, float, float, float], float]

    def __call__(self, s: float, t: float, m1: float, m2: float) -> float:
        return float(self.fn(s, t, m1, m2))


WEALTH_RATIO = CandidateValueFn("wealth_ratio", lambda s, t, m1, m2: m1 / m2)
CONSTANT_ONE = CandidateValueFn("constant_one", lambda s, t, m1, m2: 1.0)


def _require_univariate(m: MarketParams) -> tuple[float, float, float]:
    if m.n != 1:
        raise DimensionMismatch(
            f"the PDE check is single-stock only; market has {m.n} stocks"
        )
    return m.r, float(m.mu[0]), float(m.sigma[0])


def hjb_rhs(
    m: MarketParams,
    J: CandidateValueFn,
    x: StatePoint,
    b: float,
    c: float,
    h: float = DEFAULT_STEP,
) -> float:
    """Residual of the dynamic-programming equation at (x, b, c): generator + dJ/dt.

    Vanishes (to truncation error) wherever J solves the PDE under controls
    (b, c). All partials are central differences with relative step
    h * (1 + |coordinate|); the time stencil may cross t = 0 (candidates
    are ordinary functions of t), but price and wealth stencil points must
    stay strictly positive.
    """
    if h <= 0:
        raise ValueError(f"step h must be > 0, got {h}")
    r, mu, sigma = _require_univariate(m)
    s, t, m1, m2 = x.s, x.t, x.m1, x.m2
    hs = h * (1.0 + abs(s))
    ht = h * (1.0 + abs(t))
    h1 = h * (1.0 + abs(m1))
    h2 = h * (1.0 + abs(m2))
    if s - hs <= 0 or m1 - h1 <= 0 or m2 - h2 <= 0:
        raise DomainViolation(
            f"stencil of step {h} leaves the positive domain at {x}"
        )

    def f(ds=0.0, dt=0.0, dm1=0.0, dm2=0.0) -> float:
        return J(s + ds, t + dt, m1 + dm1, m2 + dm2)

    j_t = (f(dt=ht) - f(dt=-ht)) / (2 * ht)
    j_s = (f(ds=hs) - f(ds=-hs)) / (2 * hs)
    j_m1 = (f(dm1=h1) - f(dm1=-h1)) / (2 * h1)
    j_m2 = (f(dm2=h2) - f(dm2=-h2)) / (2 * h2)
    center = f()
    j_ss = (f(ds=hs) - 2 * center + f(ds=-hs)) / hs**2
    j_m1m1 = (f(dm1=h1) - 2 * center + f(dm1=-h1)) / h1**2
    j_m2m2 = (f(dm2=h2) - 2 * center + f(dm2=-h2)) / h2**2
    j_sm1 = (
        f(ds=hs, dm1=h1) - f(ds=hs, dm1=-h1) - f(ds=-hs, dm1=h1) + f(ds=-hs, dm1=-h1)
    ) / (4 * hs * h1)
    j_sm2 = (
        f(ds=hs, dm2=h2) - f(ds=hs, dm2=-h2) - f(ds=-hs, dm2=h2) + f(ds=-hs, dm2=-h2)
    ) / (4 * hs * h2)
    j_m1m2 = (
        f(dm1=h1, dm2=h2) - f(dm1=h1, dm2=-h2) - f(dm1=-h1, dm2=h2) + f(dm1=-h1, dm2=-h2)
    ) / (4 * h1 * h2)

    sig2 = sigma * sigma
    generator = (
        mu * s * j_s
        + (r + b * (mu - r)) * m1 * j_m1
        + (r + c * (mu - r)) * m2 * j_m2
        + 0.5 * sig2 * s * s * j_ss
        + 0.5 * b * b * sig2 * m1 * m1 * j_m1m1
        + 0.5 * c * c * sig2 * m2 * m2 * j_m2m2
        + b * sig2 * s * m1 * j_sm1
        + c * sig2 * s * m2 * j_sm2
        + b * c * sig2 * m1 * m2 * j_m1m2
    )
    return generator + j_t


@dataclass(frozen=True, eq=False)
class ResidualSample:
    state: StatePoint
    b: float
    c: float
    residual: float


@dataclass(frozen=True, eq=False)
class MutualBestResponseReport:
    """Numerical verification that the Kelly controls solve both players' PDEs.

    ``b_sweep`` holds residuals with Player 2 pinned at Kelly (all must
    vanish: Player 1 is indifferent, so Kelly is a best response);
    ``c_sweep`` holds residuals with Player 1 pinned at Kelly (all must be
    >= 0 with the unique zero at c = Kelly, so Kelly uniquely minimizes).
    """

    kelly: float
    step: float
    tolerance: float
    b_sweep: tuple[ResidualSample, ...]
    c_sweep: tuple[ResidualSample, ...]
    max_abs_b_residual: float
    min_c_residual: float
    spurious_c_zeros: tuple[float, ...]
    b_sweep_ok: bool
    c_sweep_nonnegative: bool
    c_zero_at_kelly: bool

    @property
    def passed(self) -> bool:
        return (
            self.b_sweep_ok
            and self.c_sweep_nonnegative
            and self.c_zero_at_kelly
            and not self.spurious_c_zeros
        )


def verify_mutual_best_response(
    m: MarketParams,
    grid_b: Sequence[float],
    grid_c: Sequence[float],
    x_probes: Sequence[StatePoint],
    J: CandidateValueFn = WEALTH_RATIO,
    h: float = VERIFY_STEP,
    tolerance: float = DEFAULT_TOL,
) -> MutualBestResponseReport:
    """Sweep the control grids at the Kelly point and collect PDE residuals.

    Both grids must contain the Kelly value (that is the point being
    certified). Failures are reported, not raised.
    """
    r, mu, sigma = _require_univariate(m)
    kelly = float(kelly_rule(m)[0])
    grid_b = [float(v) for v in grid_b]
    grid_c = [float(v) for v in grid_c]
    if not x_probes:
        raise ValueError("x_probes must be nonempty")
    for name, grid in (("grid_b", grid_b), ("grid_c", grid_c)):
        if min(abs(v - kelly) for v in grid) > 1e-9 * (1.0 + abs(kelly)):
            raise ValueError(f"{name} must contain the Kelly value {kelly}")

    b_sweep = [
        ResidualSample(state=x, b=b, c=kelly, residual=hjb_rhs(m, J, x, b, kelly, h))
        for x in x_probes
        for b in grid_b
    ]
    c_sweep = [
        ResidualSample(state=x, b=kelly, c=c, residual=hjb_rhs(m, J, x, kelly, c, h))
        for x in x_probes
        for c in grid_c
    ]
    max_abs_b = max(abs(s.residual) for s in b_sweep)
    min_c = min(s.residual for s in c_sweep)

    # A residual within tolerance of 0 counts as a zero; genuine zeros of
    # sigma^2 (c - kelly)^2 M1/M2 can only sit within this radius of Kelly.
    spurious = []
    zero_at_kelly = False
    sig2 = sigma * sigma
    for sample in c_sweep:
        if abs(sample.residual) <= tolerance:
            scale = sample.state.m1 / sample.state.m2
            radius = np.sqrt(2.0 * tolerance / (sig2 * scale))
            if abs(sample.c - kelly) <= radius:
                zero_at_kelly = True
            else:
                spurious.append(sample.c)

    return MutualBestResponseReport(
        kelly=kelly,
        step=h,
        tolerance=tolerance,
        b_sweep=tuple(b_sweep),
        c_sweep=tuple(c_sweep),
        max_abs_b_residual=max_abs_b,
        min_c_residual=min_c,
        spurious_c_zeros=tuple(sorted(set(spurious))),
        b_sweep_ok=max_abs_b <= tolerance,
        c_sweep_nonnegative=min_c >= -tolerance,
        c_zero_at_kelly=zero_at_kelly,
    )
