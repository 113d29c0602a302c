"""Request handlers: one function per endpoint, free of transport concerns.

Each handler maps a request model to a response model and raises the
package's domain errors (or ValueError) on bad inputs; the FastAPI layer
turns those into 422 responses and the CLI turns them into exit code 2.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from .. import analytics, hjb, phigame, simulate, solver
from ..errors import DimensionMismatch
from ..market import MarketParams
from . import schemas

# Default probe offsets around the Kelly point, applied per coordinate.
PROBE_OFFSETS = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)

_CSV_HEADER_PLAY = "t,v1,v2,ratio"
_CSV_HEADER_CURVE = "c,b_kind,c_star_of_b"


def _fmt(x: float) -> str:
    """17 significant digits: round-trip exact for 64-bit floats."""
    return format(float(x), ".17g")


def default_probe_grid(kelly: np.ndarray) -> list[np.ndarray]:
    """Probe rules bracketing the equilibrium: kelly + offsets per coordinate."""
    axes = [[k + off for off in PROBE_OFFSETS] for k in kelly]
    return [np.array(combo) for combo in product(*axes)]


def equilibrium(req: schemas.EquilibriumRequest) -> schemas.EquilibriumResponse:
    m = req.scenario.market()
    kelly = solver.kelly_rule(m)
    probes = req.probes if req.probes else default_probe_grid(kelly)
    report = solver.verify_saddle(m, probes)
    return schemas.EquilibriumResponse(
        scenario=req.scenario,
        kelly=[float(v) for v in kelly],
        growth_rate_at_kelly=analytics.growth_rate(m, kelly),
        saddle=schemas.SaddleSummary(
            upper_margin=report.upper_margin,
            lower_margin=report.lower_margin,
            n_probes=report.n_probes,
            tolerance=report.tolerance,
            violations=len(report.violations),
            passed=report.passed,
        ),
    )


def best_response_curves(
    req: schemas.BestResponseCurveRequest,
) -> schemas.BestResponseCurveResponse:
    m = req.scenario.market()
    if m.n != 1:
        raise DimensionMismatch("best-response curves are defined for single-stock markets")
    kelly = solver.kelly_rule(m)
    if not (req.lo <= float(kelly[0]) <= req.hi):
        raise ValueError(
            f"range [{req.lo}, {req.hi}] must contain the Kelly value {float(kelly[0])}"
        )
    if req.hi <= req.lo:
        raise ValueError(f"range [{req.lo}, {req.hi}] is empty")
    count = int(round((req.hi - req.lo) / req.step))
    grid = np.linspace(req.lo, req.lo + count * req.step, count + 1)
    rows = []
    for g in grid:
        kind = solver.best_response_p1(m, [g]).kinds[0].value
        c_star = float(solver.best_response_p2(m, [g])[0])
        rows.append(schemas.CurveRow(c=float(g), b_kind=kind, c_star_of_b=c_star))
    csv_lines = [_CSV_HEADER_CURVE]
    csv_lines += [f"{_fmt(r.c)},{r.b_kind},{_fmt(r.c_star_of_b)}" for r in rows]
    return schemas.BestResponseCurveResponse(
        scenario=req.scenario,
        kelly=[float(v) for v in kelly],
        rows=rows,
        csv="\n".join(csv_lines) + "\n",
    )


def _resolve_rule(m: MarketParams, explicit, scenario_default) -> np.ndarray:
    if explicit is not None:
        return np.asarray(explicit, dtype=float)
    if scenario_default is not None:
        return np.asarray(scenario_default, dtype=float)
    return solver.kelly_rule(m)


def _resolve_sim(req, scenario: schemas.Scenario) -> schemas.SimSettings:
    base = scenario.sim if scenario.sim is not None else schemas.SimSettings()
    return schemas.SimSettings(
        horizon=req.horizon if req.horizon is not None else base.horizon,
        steps=req.steps if req.steps is not None else base.steps,
        paths=req.paths if req.paths is not None else base.paths,
        seed=req.seed if req.seed is not None else base.seed,
    )


def run_simulation(req: schemas.SimulateRequest) -> schemas.SimulateResponse:
    m = req.scenario.market()
    b = _resolve_rule(m, req.b, req.scenario.b)
    c = _resolve_rule(m, req.c, req.scenario.c)
    sim = _resolve_sim(req, req.scenario)
    cfg = simulate.SimConfig(
        horizon=sim.horizon, steps=sim.steps, paths=sim.paths, seed=sim.seed
    )
    t = cfg.horizon
    ref_ratio = analytics.payoff_kernel(m, b, c).ratio_at_t(t)
    ref_win = analytics.win_probability(m, b, c, t)
    common = dict(
        scenario=req.scenario,
        b=[float(v) for v in b],
        c=[float(v) for v in c],
        sim=sim,
        reference_expected_ratio=ref_ratio,
        reference_win_probability=ref_win,
    )
    if cfg.paths == 1:
        play = simulate.sample_play(m, b, c, cfg)
        lines = [_CSV_HEADER_PLAY]
        lines += [
            f"{_fmt(t_)},{_fmt(v1)},{_fmt(v2)},{_fmt(ratio)}" for t_, v1, v2, ratio in play.rows()
        ]
        return schemas.SimulateResponse(mode="sample_play", csv="\n".join(lines) + "\n", **common)
    batch = simulate.simulate_paths(m, cfg)
    ratio = simulate.estimate_expected_ratio(batch, m, b, c, t)
    win = simulate.estimate_win_probability(batch, m, b, c, t)
    return schemas.SimulateResponse(
        mode="estimate",
        expected_ratio=schemas.EstimateSummary(
            estimate=ratio.estimate,
            std_error=ratio.std_error,
            paths=ratio.paths,
            seed=ratio.seed,
            reference=ref_ratio,
        ),
        win_probability=schemas.EstimateSummary(
            estimate=win.estimate,
            std_error=win.std_error,
            paths=win.paths,
            seed=win.seed,
            reference=ref_win,
        ),
        **common,
    )


_RANDOMIZATIONS = {
    "uniform_0_2": phigame.uniform_0_2,
    "point_mass": phigame.point_mass,
}


def _resolve_randomization(name: str | None, phi_name: str) -> phigame.FairRandomization:
    if name is None:
        # The uniform exchange is the indicator-game equilibrium; for other
        # criteria the degenerate dollar is the sensible default (a uniform
        # denominator would give the identity criterion an infinite mean).
        name = "uniform_0_2" if phi_name == "indicator" else "point_mass"
    try:
        return _RANDOMIZATIONS[name]()
    except KeyError:
        raise ValueError(
            f"unknown randomization {name!r}; expected one of {sorted(_RANDOMIZATIONS)}"
        ) from None


def phi_game(req: schemas.PhiGameRequest) -> schemas.PhiGameResponse:
    m = req.scenario.market()
    phi = phigame.phi_by_name(req.phi)
    b = _resolve_rule(m, req.b, req.scenario.b)
    c = _resolve_rule(m, req.c, req.scenario.c)
    w1 = _resolve_randomization(req.w1, phi.name)
    w2 = _resolve_randomization(req.w2, phi.name)
    cfg = simulate.SimConfig(horizon=req.t, steps=req.steps, paths=req.samples, seed=req.seed)
    est = phigame.investment_phi_game_payoff(m, b, c, w1, w2, phi, req.t, cfg)
    reference: float | None = None
    if phi.name == "indicator" and w1.name == "uniform_0_2" and w2.name == "uniform_0_2":
        reference = 0.5
    elif phi.name == "identity" and w1.name.startswith("point_mass") and w2.name.startswith(
        "point_mass"
    ):
        reference = (
            w1.mean / w2.mean * analytics.payoff_kernel(m, b, c).ratio_at_t(req.t)
            if w2.mean > 0
            else None
        )
    return schemas.PhiGameResponse(
        scenario=req.scenario,
        phi=phi.name,
        b=[float(v) for v in b],
        c=[float(v) for v in c],
        w1=w1.name,
        w2=w2.name,
        t=req.t,
        estimate=est.estimate,
        std_error=est.std_error,
        samples=est.samples,
        seed=est.seed,
        zero_resamples=est.zero_resamples,
        value_reference=reference,
    )


_DEFAULT_PROBES = (
    schemas.StateProbe(s=1.0, t=0.0, m1=1.0, m2=1.0),
    schemas.StateProbe(s=2.0, t=1.0, m1=2.0, m2=1.0),
    schemas.StateProbe(s=0.5, t=0.5, m1=1.0, m2=2.0),
)


def hjb_check(req: schemas.HjbCheckRequest) -> schemas.HjbCheckResponse:
    m = req.scenario.market()
    if m.n != 1:
        raise DimensionMismatch("the PDE check supports single-stock scenarios only")
    kelly = float(solver.kelly_rule(m)[0])
    grid_b = req.grid_b if req.grid_b else [kelly + off for off in PROBE_OFFSETS]
    grid_c = req.grid_c if req.grid_c else [kelly + off for off in PROBE_OFFSETS]
    probes = req.probes if req.probes else list(_DEFAULT_PROBES)
    states = [hjb.StatePoint(s=p.s, t=p.t, m1=p.m1, m2=p.m2) for p in probes]
    kwargs = {}
    if req.step is not None:
        kwargs["h"] = req.step
    if req.tolerance is not None:
        kwargs["tolerance"] = req.tolerance
    report = hjb.verify_mutual_best_response(m, grid_b, grid_c, states, **kwargs)
    # negative control: a flat candidate zeroes every residual and must be
    # caught by the spurious-zero detector, or the verdict is meaningless
    sanity = hjb.verify_mutual_best_response(
        m, [kelly, kelly + 1.0], [kelly, kelly + 1.0], states[:1], J=hjb.CONSTANT_ONE
    )
    constant_flagged = not sanity.passed

    def rows(sweep):
        return [
            schemas.ResidualRow(
                s=smp.state.s,
                t=smp.state.t,
                m1=smp.state.m1,
                m2=smp.state.m2,
                b=smp.b,
                c=smp.c,
                residual=smp.residual,
            )
            for smp in sweep
        ]

    return schemas.HjbCheckResponse(
        scenario=req.scenario,
        kelly=report.kelly,
        step=report.step,
        tolerance=report.tolerance,
        b_sweep=rows(report.b_sweep),
        c_sweep=rows(report.c_sweep),
        max_abs_b_residual=report.max_abs_b_residual,
        min_c_residual=report.min_c_residual,
        spurious_c_zeros=list(report.spurious_c_zeros),
        constant_candidate_flagged=constant_flagged,
        passed=report.passed and constant_flagged,
    )
