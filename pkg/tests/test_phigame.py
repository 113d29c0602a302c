import math

import numpy as np
import pytest

from kellygame import (
    DivisionDegenerate,
    FairRandomization,
    IDENTITY,
    INDICATOR,
    LOG,
    SimConfig,
    estimate_expected_ratio,
    investment_phi_game_payoff,
    kelly_rule,
    payoff_kernel,
    phi_by_name,
    point_mass,
    primitive_game_payoff,
    simulate_paths,
    theorem1_check,
    uniform_0_2,
)
from kellygame.simulate import philox

from conftest import KERNEL_HALF_VS_ONE


# ---------------------------------------------------------------------------
# fair randomizations


def test_uniform_certificate_and_stats():
    w = uniform_0_2()
    assert w.mean == 1.0
    draws = w.sample(philox(99, 1), 1_000_000)
    assert np.all(draws >= 0.0)
    se = (2.0 / math.sqrt(12.0)) / 1000.0
    assert abs(draws.mean() - 1.0) <= 4.0 * se
    # uniform CDF arithmetic: P(U >= 1) = (2 - 1)/2
    p_ge_1 = (draws >= 1.0).mean()
    assert abs(p_ge_1 - 0.5) <= 4.0 * 0.0005


def test_point_mass_properties():
    w = point_mass(1.0)
    assert w.mean == 1.0
    assert np.all(w.sample(philox(1, 1), 100) == 1.0)
    with pytest.raises(ValueError):
        point_mass(-0.5)


def test_mean_certificate_enforced():
    with pytest.raises(ValueError):
        FairRandomization(name="too_rich", mean=1.2, sampler=lambda rng, n: rng.uniform(0, 2.4, n))
    with pytest.raises(ValueError):
        point_mass(1.5)


def test_sampler_negativity_rejected():
    w = FairRandomization(name="bad", mean=0.0, sampler=lambda rng, n: np.full(n, -1.0))
    with pytest.raises(ValueError):
        w.sample(philox(0, 1), 4)


# ---------------------------------------------------------------------------
# phi functions


def test_builtin_phis_nondecreasing():
    probes = np.geomspace(1e-3, 1e3, 101)
    for phi in (INDICATOR, IDENTITY, LOG):
        assert phi.is_nondecreasing_on(probes)


def test_indicator_counts_ties_as_wins():
    assert list(INDICATOR([0.99, 1.0, 1.5])) == [0.0, 1.0, 1.0]


def test_phi_by_name():
    assert phi_by_name("indicator") is INDICATOR
    assert phi_by_name("identity") is IDENTITY
    assert phi_by_name("log") is LOG
    with pytest.raises(ValueError):
        phi_by_name("cubic")


# ---------------------------------------------------------------------------
# primitive game


def test_primitive_uniform_vs_uniform_half():
    est = primitive_game_payoff(uniform_0_2(), uniform_0_2(), INDICATOR, 1_000_000, seed=21)
    assert abs(est.estimate - 0.5) <= 4.0 * est.std_error
    assert est.samples == 1_000_000
    assert est.phi == "indicator"


def test_primitive_point_vs_point_exactly_one():
    est = primitive_game_payoff(point_mass(1.0), point_mass(1.0), INDICATOR, 10_000, seed=0)
    assert est.estimate == 1.0
    assert est.std_error == 0.0


def test_primitive_uniform_vs_point_half():
    est = primitive_game_payoff(uniform_0_2(), point_mass(1.0), INDICATOR, 500_000, seed=33)
    assert abs(est.estimate - 0.5) <= 4.0 * est.std_error


def test_primitive_requires_samples():
    with pytest.raises(ValueError):
        primitive_game_payoff(uniform_0_2(), uniform_0_2(), INDICATOR, 0, seed=1)


def test_zero_denominator_resampled_and_counted():
    flaky = FairRandomization(
        name="half_zero",
        mean=0.5,
        sampler=lambda rng, n: np.where(rng.uniform(0, 1, n) < 0.5, 0.0, 1.0),
    )
    est = primitive_game_payoff(point_mass(1.0), flaky, INDICATOR, 20_000, seed=3)
    assert est.zero_resamples > 0
    assert est.estimate == 1.0  # every surviving denominator equals 1


def test_all_zero_denominator_degenerate():
    with pytest.raises(DivisionDegenerate):
        primitive_game_payoff(uniform_0_2(), point_mass(0.0), INDICATOR, 100, seed=4)


# ---------------------------------------------------------------------------
# investment game


def test_equilibrium_play_estimates_half(shannon):
    k = kelly_rule(shannon)
    cfg = SimConfig(horizon=10.0, steps=1, paths=200_000, seed=2)
    est = investment_phi_game_payoff(
        shannon, k, k, uniform_0_2(), uniform_0_2(), INDICATOR, 10.0, cfg
    )
    assert abs(est.estimate - 0.5) <= 4.0 * est.std_error


def test_identity_with_point_masses_matches_ratio_path_for_path(shannon):
    cfg = SimConfig(horizon=1.0, steps=1, paths=50_000, seed=19)
    est = investment_phi_game_payoff(
        shannon, [0.5], [1.0], point_mass(1.0), point_mass(1.0), IDENTITY, 1.0, cfg
    )
    batch = simulate_paths(shannon, cfg)
    ratio = estimate_expected_ratio(batch, shannon, [0.5], [1.0], 1.0)
    assert est.estimate == ratio.estimate  # bitwise: same paths, unit masses
    assert est.std_error == ratio.std_error
    reference = payoff_kernel(shannon, [0.5], [1.0]).ratio_at_t(1.0)
    assert abs(est.estimate - reference) <= 4.0 * est.std_error
    assert abs(reference - math.exp(KERNEL_HALF_VS_ONE)) < 1e-15


def test_kelly_forces_ratio_at_least_one(shannon):
    k = kelly_rule(shannon)
    cfg = SimConfig(horizon=1.0, steps=1, paths=100_000, seed=29)
    for probe in ([0.0], [1.0], [2.0], [-1.0]):
        est = investment_phi_game_payoff(
            shannon, k, probe, point_mass(1.0), point_mass(1.0), IDENTITY, 1.0, cfg
        )
        assert est.estimate >= 1.0 - 4.0 * est.std_error


def test_indicator_invariant_under_common_scaling(shannon):
    # scaling both players' stakes by 7.3 cancels inside the ratio: the
    # indicator outcome is unchanged path for path
    cfg = SimConfig(horizon=10.0, steps=1, paths=50_000, seed=57)
    batch = simulate_paths(shannon, cfg)
    idx = batch.time_index(10.0)
    log_ratio = batch.log_wealth([0.5])[:, idx] - batch.log_wealth([1.0])[:, idx]
    x1 = uniform_0_2().sample(philox(cfg.seed, 1), cfg.paths)
    x2 = uniform_0_2().sample(philox(cfg.seed, 2), cfg.paths)
    base = INDICATOR(x1 / x2 * np.exp(log_ratio))
    scaled = INDICATOR((7.3 * x1) / (7.3 * x2) * np.exp(log_ratio))
    assert np.array_equal(base, scaled)
    est = investment_phi_game_payoff(
        shannon, [0.5], [1.0], uniform_0_2(), uniform_0_2(), INDICATOR, 10.0, cfg
    )
    assert est.estimate == base.mean()


def test_investment_off_grid_time(shannon):
    cfg = SimConfig(horizon=1.0, steps=2, paths=100, seed=1)
    from kellygame import TimeOffGrid

    with pytest.raises(TimeOffGrid):
        investment_phi_game_payoff(
            shannon, [0.5], [1.0], point_mass(1.0), point_mass(1.0), IDENTITY, 0.3, cfg
        )


# ---------------------------------------------------------------------------
# Theorem-1 sandwich


def test_theorem1_report_shannon(shannon):
    cfg = SimConfig(horizon=10.0, steps=1, paths=100_000, seed=101)
    k = kelly_rule(shannon)
    probes = [(k, uniform_0_2()), ([1.0], uniform_0_2()), ([2.0], uniform_0_2())]
    report = theorem1_check(shannon, probes, INDICATOR, 10.0, cfg)
    assert report.passed
    assert report.value_reference == 0.5
    # probe at the Kelly rule: the ratio is exactly 1, the composite is the
    # raw uniform draw, so its mean sits at E[W2] = 1 up to noise
    kelly_row = report.results[0]
    assert abs(kelly_row.composite_mean - 1.0) <= 4.0 * kelly_row.composite_std_error
    # buy-and-hold probe: the coefficient mu - r - sigma^2 * kelly vanishes,
    # so E[V(c)/V(kelly)] = 1 exactly and the composite mean sits at E[W2] = 1
    hold_row = report.results[1]
    assert abs(hold_row.composite_mean - 1.0) <= 4.0 * hold_row.composite_std_error
    assert hold_row.composite_ok


def test_theorem1_leveraged_probe_bounded_above(shannon):
    cfg = SimConfig(horizon=10.0, steps=1, paths=100_000, seed=202)
    report = theorem1_check(shannon, [([2.0], uniform_0_2())], INDICATOR, 10.0, cfg)
    row = report.results[0]
    assert row.payoff_of_probe.estimate <= 0.5 + 4.0 * row.payoff_of_probe.std_error
    assert row.payoff_vs_probe.estimate >= 0.5 - 4.0 * row.payoff_vs_probe.std_error


def test_theorem1_requires_probes(shannon):
    with pytest.raises(ValueError):
        theorem1_check(
            shannon, [], INDICATOR, 1.0, SimConfig(horizon=1.0, steps=1, paths=10, seed=0)
        )
