"""Command-line client for the trading-game service.

The CLI holds no domain logic: each command builds a request model,
dispatches it to the service layer (in-process by default, or to a running
server via --server URL), and formats the response. Exit codes: 0 success,
2 usage or validation error, 3 output I/O error, 4 a verification check
failed.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import httpx
from pydantic import BaseModel, ValidationError

from .errors import KellyGameError
from .service import handlers, schemas

EXIT_USAGE = 2
EXIT_IO = 3
EXIT_CHECK = 4

_ENDPOINTS = {
    "equilibrium": (schemas.EquilibriumRequest, handlers.equilibrium),
    "best-response-curves": (schemas.BestResponseCurveRequest, handlers.best_response_curves),
    "simulate": (schemas.SimulateRequest, handlers.run_simulation),
    "phi-game": (schemas.PhiGameRequest, handlers.phi_game),
    "hjb-check": (schemas.HjbCheckRequest, handlers.hjb_check),
}


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_scenario(path: str) -> schemas.Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        _fail(EXIT_USAGE, f"cannot read scenario file {path}: {exc}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        _fail(EXIT_USAGE, f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}")
    try:
        return schemas.Scenario.model_validate(data)
    except ValidationError as exc:
        lines = [
            f"{path}: field {'.'.join(str(p) for p in err['loc'])}: {err['msg']}"
            for err in exc.errors()
        ]
        _fail(EXIT_USAGE, "invalid scenario\n" + "\n".join(lines))
    raise AssertionError("unreachable")


def _dispatch(endpoint: str, request: BaseModel, server: str | None) -> dict:
    """Run the request in-process or POST it to a remote server; return the payload."""
    if server is None:
        _, handler = _ENDPOINTS[endpoint]
        try:
            return handler(request).model_dump(mode="json")
        except (KellyGameError, ValidationError, ValueError) as exc:
            _fail(EXIT_USAGE, str(exc))
    url = f"{server.rstrip('/')}/{endpoint}"
    try:
        resp = httpx.post(url, json=request.model_dump(mode="json"), timeout=600.0)
    except httpx.HTTPError as exc:
        _fail(EXIT_IO, f"cannot reach {url}: {exc}")
    if resp.status_code == 422:
        detail = resp.json().get("detail", resp.text)
        _fail(EXIT_USAGE, f"server rejected request: {detail}")
    if resp.status_code != 200:
        _fail(EXIT_CHECK, f"server error {resp.status_code}: {resp.text}")
    return resp.json()


def _build_request(cls, **kwargs) -> BaseModel:
    try:
        return cls(**kwargs)
    except ValidationError as exc:
        _fail(EXIT_USAGE, str(exc))
    raise AssertionError("unreachable")


def _stable_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _write_out(out_dir: str, name: str, text: str) -> None:
    try:
        directory = Path(out_dir)
        directory.mkdir(parents=True, exist_ok=True)
        (directory / name).write_text(text)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write {name} to {out_dir}: {exc}")


def _parse_rule(value: str | None) -> list[float] | None:
    if value is None:
        return None
    try:
        return [float(x) for x in value.split(",")]
    except ValueError:
        _fail(EXIT_USAGE, f"rule {value!r} is not a comma-separated list of numbers")
    raise AssertionError("unreachable")


def _parse_grid(value: str | None) -> list[float] | None:
    return _parse_rule(value)


def common_options(f):
    f = click.option(
        "--scenario",
        "scenario_path",
        required=True,
        type=click.Path(exists=True, dir_okay=False),
        help="Scenario JSON file ({r, mu, sigma, rho, [b], [c], [sim]}).",
    )(f)
    f = click.option(
        "--server", default=None, help="Service base URL; default computes in-process."
    )(f)
    f = click.option(
        "--out", "out_dir", default=None, type=click.Path(file_okay=False),
        help="Directory for output files.",
    )(f)
    f = click.option("--json", "as_json", is_flag=True, help="Print the full JSON payload.")(f)
    return f


@click.group()
@click.version_option()
def main() -> None:
    """Continuous-time trading game: equilibria, simulations, and checks."""


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


@main.command()
@common_options
@click.option("--probes", default=None, help="Semicolon-separated probe rules (comma floats).")
def equilibrium(scenario_path, server, out_dir, as_json, probes) -> None:
    """Kelly rule, its growth rate, and a saddle-inequality report."""
    scenario = _load_scenario(scenario_path)
    probe_rules = None
    if probes is not None:
        probe_rules = [_parse_rule(p) for p in probes.split(";")]
    req = _build_request(schemas.EquilibriumRequest, scenario=scenario, probes=probe_rules)
    payload = _dispatch("equilibrium", req, server)
    if out_dir:
        _write_out(out_dir, "equilibrium.json", _stable_json(payload))
    if as_json:
        click.echo(_stable_json(payload), nl=False)
    else:
        saddle = payload["saddle"]
        click.echo(f"kelly: {payload['kelly']}")
        click.echo(f"growth rate at kelly: {payload['growth_rate_at_kelly']:.12g}")
        click.echo(
            f"saddle: {'passed' if saddle['passed'] else 'FAILED'} "
            f"({saddle['n_probes']} probes, upper margin {saddle['upper_margin']:.3e}, "
            f"lower margin {saddle['lower_margin']:.3e})"
        )
    if not payload["saddle"]["passed"]:
        sys.exit(EXIT_CHECK)


@main.command("best-response")
@common_options
@click.option("--lo", default=-2.0, show_default=True, type=float)
@click.option("--hi", default=2.0, show_default=True, type=float)
@click.option("--step", default=0.1, show_default=True, type=float)
def best_response(scenario_path, server, out_dir, as_json, lo, hi, step) -> None:
    """Best-response curve data: Player 1's response kind and Player 2's response."""
    scenario = _load_scenario(scenario_path)
    req = _build_request(schemas.BestResponseCurveRequest, scenario=scenario, lo=lo, hi=hi, step=step)
    payload = _dispatch("best-response-curves", req, server)
    if out_dir:
        _write_out(out_dir, "best_response.csv", payload["csv"])
        _write_out(out_dir, "best_response.json", _stable_json(payload))
    if as_json:
        click.echo(_stable_json(payload), nl=False)
    else:
        click.echo(payload["csv"], nl=False)


@main.command()
@common_options
@click.option("--b", "b_rule", default=None, help="Player 1 rule, comma-separated weights.")
@click.option("--c", "c_rule", default=None, help="Player 2 rule, comma-separated weights.")
@click.option("--horizon", "-T", default=None, type=float, help="Horizon T.")
@click.option("--steps", default=None, type=int)
@click.option("--paths", default=None, type=int)
@click.option("--seed", default=None, type=int)
def simulate(scenario_path, server, out_dir, as_json, b_rule, c_rule, horizon, steps, paths, seed) -> None:
    """Simulate a play (paths=1: trajectory CSV) or estimate payoffs (paths>1)."""
    scenario = _load_scenario(scenario_path)
    req = _build_request(
        schemas.SimulateRequest,
        scenario=scenario,
        b=_parse_rule(b_rule),
        c=_parse_rule(c_rule),
        horizon=horizon,
        steps=steps,
        paths=paths,
        seed=seed,
    )
    payload = _dispatch("simulate", req, server)
    if out_dir:
        if payload["mode"] == "sample_play":
            _write_out(out_dir, "sample_play.csv", payload["csv"])
        _write_out(out_dir, "simulate.json", _stable_json(payload))
    if as_json:
        click.echo(_stable_json(payload), nl=False)
        return
    click.echo(f"mode: {payload['mode']}  b: {payload['b']}  c: {payload['c']}")
    click.echo(
        f"reference expected ratio at T: {payload['reference_expected_ratio']:.6g}   "
        f"reference win probability at T: {payload['reference_win_probability']:.6g}"
    )
    if payload["mode"] == "estimate":
        er = payload["expected_ratio"]
        wp = payload["win_probability"]
        click.echo(
            f"expected ratio estimate: {er['estimate']:.6g} +/- {er['std_error']:.2g} "
            f"({er['paths']} paths)"
        )
        click.echo(
            f"win probability estimate: {wp['estimate']:.6g} +/- {wp['std_error']:.2g} "
            f"({wp['paths']} paths)"
        )
    elif not out_dir:
        click.echo(payload["csv"], nl=False)


@main.command("phi-game")
@common_options
@click.option(
    "--phi", required=True, type=click.Choice(["indicator", "identity", "log"]),
    help="Criterion applied to the wealth ratio.",
)
@click.option("--b", "b_rule", default=None, help="Player 1 rule (default: Kelly).")
@click.option("--c", "c_rule", default=None, help="Player 2 rule (default: Kelly).")
@click.option("--w1", default=None, type=click.Choice(["uniform_0_2", "point_mass"]))
@click.option("--w2", default=None, type=click.Choice(["uniform_0_2", "point_mass"]))
@click.option("--t", default=1.0, show_default=True, type=float)
@click.option("--samples", default=100_000, show_default=True, type=int)
@click.option("--steps", default=1, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
def phi_game(scenario_path, server, out_dir, as_json, phi, b_rule, c_rule, w1, w2, t, samples, steps, seed) -> None:
    """Estimate the investment phi-game payoff."""
    scenario = _load_scenario(scenario_path)
    req = _build_request(
        schemas.PhiGameRequest,
        scenario=scenario,
        phi=phi,
        b=_parse_rule(b_rule),
        c=_parse_rule(c_rule),
        w1=w1,
        w2=w2,
        t=t,
        samples=samples,
        steps=steps,
        seed=seed,
    )
    payload = _dispatch("phi-game", req, server)
    if out_dir:
        _write_out(out_dir, "phi_game.json", _stable_json(payload))
    if as_json:
        click.echo(_stable_json(payload), nl=False)
        return
    ref = payload["value_reference"]
    click.echo(
        f"phi: {payload['phi']}  w1: {payload['w1']}  w2: {payload['w2']}  t: {payload['t']}"
    )
    click.echo(
        f"estimate: {payload['estimate']:.6g} +/- {payload['std_error']:.2g} "
        f"({payload['samples']} samples)"
        + (f"   reference: {ref:.6g}" if ref is not None else "")
    )


@main.command("hjb-check")
@common_options
@click.option("--grid-b", default=None, help="Comma-separated Player 1 control grid.")
@click.option("--grid-c", default=None, help="Comma-separated Player 2 control grid.")
@click.option("--step", default=None, type=float, help="Finite-difference relative step.")
@click.option("--tol", default=None, type=float, help="Identity tolerance.")
def hjb_check(scenario_path, server, out_dir, as_json, grid_b, grid_c, step, tol) -> None:
    """Verify the wealth-ratio candidate solves both players' PDEs at Kelly."""
    scenario = _load_scenario(scenario_path)
    req = _build_request(
        schemas.HjbCheckRequest,
        scenario=scenario,
        grid_b=_parse_grid(grid_b),
        grid_c=_parse_grid(grid_c),
        step=step,
        tolerance=tol,
    )
    payload = _dispatch("hjb-check", req, server)
    if out_dir:
        _write_out(out_dir, "hjb_check.json", _stable_json(payload))
    if as_json:
        click.echo(_stable_json(payload), nl=False)
    else:
        click.echo(
            f"kelly: {payload['kelly']:.12g}  step: {payload['step']}  "
            f"tolerance: {payload['tolerance']}"
        )
        click.echo(
            f"b-sweep max |residual|: {payload['max_abs_b_residual']:.3e}   "
            f"c-sweep min residual: {payload['min_c_residual']:.3e}"
        )
        click.echo("hjb check: " + ("passed" if payload["passed"] else "FAILED"))
    if not payload["passed"]:
        sys.exit(EXIT_CHECK)


if __name__ == "__main__":
    main()
