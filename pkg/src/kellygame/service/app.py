"""FastAPI application exposing the trading-game toolkit."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import KellyGameError
from . import handlers, schemas


def create_app() -> FastAPI:
    app = FastAPI(
        title="kellygame",
        version=__version__,
        description=(
            "Continuous-time two-player trading game: Kelly equilibrium, payoff "
            "kernels, Monte Carlo simulation, phi-games, and PDE residual checks."
        ),
    )

    @app.exception_handler(KellyGameError)
    async def _domain_error(request: Request, exc: KellyGameError) -> JSONResponse:
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/equilibrium", response_model=schemas.EquilibriumResponse)
    def equilibrium(req: schemas.EquilibriumRequest) -> schemas.EquilibriumResponse:
        return handlers.equilibrium(req)

    @app.post("/best-response-curves", response_model=schemas.BestResponseCurveResponse)
    def best_response_curves(
        req: schemas.BestResponseCurveRequest,
    ) -> schemas.BestResponseCurveResponse:
        return handlers.best_response_curves(req)

    @app.post("/simulate", response_model=schemas.SimulateResponse)
    def run_simulation(req: schemas.SimulateRequest) -> schemas.SimulateResponse:
        return handlers.run_simulation(req)

    @app.post("/phi-game", response_model=schemas.PhiGameResponse)
    def phi_game(req: schemas.PhiGameRequest) -> schemas.PhiGameResponse:
        return handlers.phi_game(req)

    @app.post("/hjb-check", response_model=schemas.HjbCheckResponse)
    def hjb_check(req: schemas.HjbCheckRequest) -> schemas.HjbCheckResponse:
        return handlers.hjb_check(req)

    return app
