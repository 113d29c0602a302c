"""Fair randomizations of the initial dollar and the phi-game estimators.

A fair randomization exchanges the initial dollar for a nonnegative random
wealth with mean at most 1. The primitive game pits two such randomizations
against each other through an increasing criterion phi of their ratio; the
investment game multiplies in the two players' trading wealths. The
randomization draws use RNG streams disjoint from the path stream (spawn
keys (1,) and (2,)), so they are independent of the simulated prices.

Minimax randomizations for arbitrary phi are not solved for; uniform(0, 2)
is built in as the equilibrium exchange for the indicator criterion, and
any user-supplied pair is accepted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DivisionDegenerate
from .market import MarketParams
from .simulate import SimConfig, philox, simulate_paths
from .solver import kelly_rule

_MAX_RESAMPLE_ROUNDS = 64
_MEAN_BOUND_TOL = 1e-12


@dataclass(frozen=True)
class FairRandomization:
    """Nonnegative random initial wealth with analytic mean <= 1.

    ``mean`` is the stated certificate (validated at construction and
    statistically testable); ``sampler(rng, size)`` must return nonnegative
    draws from the distribution.
    """

    name: str
    mean: float
    sampler: Callable[[np.random.Generator, int], np.ndarray]

    def __post_init__(self):
        if self.mean > 1.0 + _MEAN_BOUND_TOL:
            raise ValueError(f"mean certificate {self.mean} exceeds 1; not a fair exchange")
        if self.mean < 0.0:
            raise ValueError(f"mean certificate {self.mean} is negative")

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        draws = np.asarray(self.sampler(rng, size), dtype=float)
        if draws.shape != (size,):
            raise ValueError(f"sampler returned shape {draws.shape}, expected ({size},)")
        if np.any(draws < 0.0):
            raise ValueError(f"sampler for {self.name!r} produced negative wealth")
        return draws


def uniform_0_2() -> FairRandomization:
    """Uniform(0, 2) exchange of the dollar; mean exactly 1.

    This is the equilibrium randomization of the indicator-criterion game.
    """
    return FairRandomization(
        name="uniform_0_2", mean=1.0, sampler=lambda rng, size: rng.uniform(0.0, 2.0, size)
    )


def point_mass(value: float = 1.0) -> FairRandomization:
    """Degenerate exchange: keep ``value`` dollars with certainty (value <= 1)."""
    if value < 0.0:
        raise ValueError(f"point mass must be nonnegative, got {value}")
    return FairRandomization(
        name=f"point_mass_{value:g}",
        mean=value,
        sampler=lambda rng, size: np.full(size, float(value)),
    )


@dataclass(frozen=True)
class PhiFunction:
    """Nondecreasing criterion applied to the wealth ratio."""

    name: str
    fn: Callable[[np.ndarray], np.ndarray]

    def __call__(self, x) -> np.ndarray:
        return self.fn(np.asarray(x, dtype=float))

    def is_nondecreasing_on(self, probes) -> bool:
        """Spot-check monotonicity on a sorted probe grid."""
        xs = np.sort(np.asarray(probes, dtype=float))
        ys = self(xs)
        return bool(np.all(np.diff(ys) >= 0.0))


INDICATOR = PhiFunction("indicator", lambda x: (x >= 1.0).astype(float))
IDENTITY = PhiFunction("identity", lambda x: x)
LOG = PhiFunction("log", np.log)

_PHI_BY_NAME = {p.name: p for p in (INDICATOR, IDENTITY, LOG)}


def phi_by_name(name: str) -> PhiFunction:
    try:
        return _PHI_BY_NAME[name]
    except KeyError:
        raise ValueError(f"unknown phi {name!r}; expected one of {sorted(_PHI_BY_NAME)}") from None


@dataclass(frozen=True)
class PhiGameEstimate:
    """Monte Carlo estimate of a phi-game payoff.

    ``zero_resamples`` counts denominator draws that hit exactly 0 and were
    redrawn (resampling preserves the law when P(W = 0) = 0).
    """

    estimate: float
    std_error: float
    samples: int
    seed: int
    phi: str
    zero_resamples: int = 0


def _draw_positive(w: FairRandomization, rng: np.random.Generator, size: int) -> tuple[np.ndarray, int]:
    """Draw ``size`` samples, resampling exact zeros; count the resamples."""
    draws = w.sample(rng, size)
    resampled = 0
    for _ in range(_MAX_RESAMPLE_ROUNDS):
        zero = draws == 0.0
        k = int(zero.sum())
        if k == 0:
            return draws, resampled
        resampled += k
        draws = draws.copy()
        draws[zero] = w.sample(rng, k)
    raise DivisionDegenerate(
        f"denominator randomization {w.name!r} keeps sampling zeros; ratio undefined"
    )


def _summarize(values: np.ndarray, seed: int, phi: PhiFunction, zeros: int) -> PhiGameEstimate:
    n = values.shape[0]
    se = float(values.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return PhiGameEstimate(
        estimate=float(values.mean()),
        std_error=se,
        samples=n,
        seed=seed,
        phi=phi.name,
        zero_resamples=zeros,
    )


def primitive_game_payoff(
    w1: FairRandomization,
    w2: FairRandomization,
    phi: PhiFunction,
    samples: int,
    seed: int,
) -> PhiGameEstimate:
    """Estimate E[phi(W1 / W2)] with independent draws of the two randomizations."""
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    x1 = w1.sample(philox(seed, 1), samples)
    x2, zeros = _draw_positive(w2, philox(seed, 2), samples)
    return _summarize(phi(x1 / x2), seed, phi, zeros)


def investment_phi_game_payoff(
    m: MarketParams,
    b,
    c,
    w1: FairRandomization,
    w2: FairRandomization,
    phi: PhiFunction,
    t: float,
    cfg: SimConfig,
) -> PhiGameEstimate:
    """Estimate E[phi(W1 V_t(b) / (W2 V_t(c)))].

    The wealths share one Brownian batch; W1 and W2 come from streams
    disjoint from the path stream, hence independent of the prices.
    """
    batch = simulate_paths(m, cfg)
    idx = batch.time_index(t)
    log_ratio = batch.log_wealth(b)[:, idx] - batch.log_wealth(c)[:, idx]
    x1 = w1.sample(philox(cfg.seed, 1), cfg.paths)
    x2, zeros = _draw_positive(w2, philox(cfg.seed, 2), cfg.paths)
    return _summarize(phi(x1 / x2 * np.exp(log_ratio)), cfg.seed, phi, zeros)


@dataclass(frozen=True, eq=False)
class Theorem1ProbeResult:
    """Checks for one probe (rule, randomization) against the equilibrium pair."""

    probe_rule: np.ndarray
    probe_randomization: str
    composite_mean: float
    composite_std_error: float
    composite_ok: bool
    payoff_vs_probe: PhiGameEstimate
    payoff_vs_probe_ok: bool
    payoff_of_probe: PhiGameEstimate
    payoff_of_probe_ok: bool

    @property
    def passed(self) -> bool:
        return self.composite_ok and self.payoff_vs_probe_ok and self.payoff_of_probe_ok


@dataclass(frozen=True, eq=False)
class Theorem1Report:
    kelly: np.ndarray
    value_reference: float
    t: float
    results: tuple[Theorem1ProbeResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def theorem1_check(
    m: MarketParams,
    probes,
    phi: PhiFunction,
    t: float,
    cfg: SimConfig,
    value_reference: float = 0.5,
    n_se: float = 4.0,
) -> Theorem1Report:
    """Verify the equilibrium sandwich of the investment game against probes.

    For each probe (rule, randomization), three checks:
    (i) the composite W_probe * V_t(rule) / V_t(kelly) has sample mean
    <= 1 + n_se standard errors (it is itself a fair randomization);
    (ii) the equilibrium pair (uniform(0, 2), kelly) playing as Player 1
    against the probe earns at least the reference value minus noise;
    (iii) the probe playing as Player 1 against the equilibrium pair earns
    at most the reference value plus noise.
    """
    probe_list = list(probes)
    if not probe_list:
        raise ValueError("probes must be nonempty")
    kelly = kelly_rule(m)
    equilibrium_w = uniform_0_2()
    batch = simulate_paths(m, cfg)
    idx = batch.time_index(t)
    log_kelly = batch.log_wealth(kelly)[:, idx]
    results = []
    for rule, w in probe_list:
        ratio_to_kelly = np.exp(batch.log_wealth(rule)[:, idx] - log_kelly)
        w_draws, _ = _draw_positive(w, philox(cfg.seed, 2), cfg.paths)
        composite = w_draws * ratio_to_kelly
        comp_mean = float(composite.mean())
        comp_se = float(composite.std(ddof=1) / np.sqrt(cfg.paths))
        hi = investment_phi_game_payoff(m, kelly, rule, equilibrium_w, w, phi, t, cfg)
        lo = investment_phi_game_payoff(m, rule, kelly, w, equilibrium_w, phi, t, cfg)
        results.append(
            Theorem1ProbeResult(
                probe_rule=np.asarray(rule, dtype=float),
                probe_randomization=w.name,
                composite_mean=comp_mean,
                composite_std_error=comp_se,
                composite_ok=comp_mean <= 1.0 + n_se * comp_se,
                payoff_vs_probe=hi,
                payoff_vs_probe_ok=hi.estimate >= value_reference - n_se * hi.std_error,
                payoff_of_probe=lo,
                payoff_of_probe_ok=lo.estimate <= value_reference + n_se * lo.std_error,
            )
        )
    return Theorem1Report(
        kelly=kelly, value_reference=value_reference, t=t, results=tuple(results)
    )
