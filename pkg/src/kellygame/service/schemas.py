"""Pydantic request/response models for the service and the scenario file format.

The scenario schema is the one the CLI and test fixtures read:
{"r": number, "mu": [number], "sigma": [number], "rho": [[number]]} with
optional "b", "c" rules and an optional "sim" config block. Every response
carries a schema_version and echoes the inputs that produced it, so output
files are self-describing and reproducible.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

from ..market import MarketParams, build_market

SCHEMA_VERSION = 1


class SimSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    horizon: float = 1.0
    steps: int = Field(default=1, ge=1)
    paths: int = Field(default=100_000, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)


class Scenario(BaseModel):
    """Market parameters plus optional default rules and sim config."""

    model_config = ConfigDict(extra="forbid")

    r: float
    mu: list[float] = Field(min_length=1)
    sigma: list[float] = Field(min_length=1)
    rho: list[list[float]] | None = None
    b: list[float] | None = None
    c: list[float] | None = None
    sim: SimSettings | None = None

    def market(self) -> MarketParams:
        """Build the validated market; raises the package's domain errors."""
        return build_market(self.r, self.mu, self.sigma, self.rho)


# ---------------------------------------------------------------------------
# equilibrium


class EquilibriumRequest(BaseModel):
    scenario: Scenario
    probes: list[list[float]] | None = None


class SaddleSummary(BaseModel):
    upper_margin: float
    lower_margin: float
    n_probes: int
    tolerance: float
    violations: int
    passed: bool


class EquilibriumResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    scenario: Scenario
    kelly: list[float]
    growth_rate_at_kelly: float
    saddle: SaddleSummary


# ---------------------------------------------------------------------------
# best-response curves


class BestResponseCurveRequest(BaseModel):
    scenario: Scenario
    lo: float
    hi: float
    step: float = Field(gt=0)


class CurveRow(BaseModel):
    c: float
    b_kind: str
    c_star_of_b: float


class BestResponseCurveResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    scenario: Scenario
    kelly: list[float]
    rows: list[CurveRow]
    csv: str


# ---------------------------------------------------------------------------
# simulate


class SimulateRequest(BaseModel):
    scenario: Scenario
    b: list[float] | None = None
    c: list[float] | None = None
    horizon: float | None = None
    steps: int | None = Field(default=None, ge=1)
    paths: int | None = Field(default=None, ge=1)
    seed: int | None = Field(default=None, ge=0, lt=2**64)


class EstimateSummary(BaseModel):
    estimate: float
    std_error: float
    paths: int
    seed: int
    reference: float


class SimulateResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    scenario: Scenario
    b: list[float]
    c: list[float]
    sim: SimSettings
    mode: str  # "sample_play" or "estimate"
    csv: str | None = None
    expected_ratio: EstimateSummary | None = None
    win_probability: EstimateSummary | None = None
    reference_expected_ratio: float
    reference_win_probability: float


# ---------------------------------------------------------------------------
# phi-game


class PhiGameRequest(BaseModel):
    scenario: Scenario
    phi: str
    b: list[float] | None = None
    c: list[float] | None = None
    w1: str | None = None
    w2: str | None = None
    t: float = 1.0
    samples: int = Field(default=100_000, ge=1)
    steps: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)


class PhiGameResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    scenario: Scenario
    phi: str
    b: list[float]
    c: list[float]
    w1: str
    w2: str
    t: float
    estimate: float
    std_error: float
    samples: int
    seed: int
    zero_resamples: int
    value_reference: float | None


# ---------------------------------------------------------------------------
# hjb-check


class StateProbe(BaseModel):
    model_config = ConfigDict(extra="forbid")

    s: float = Field(gt=0)
    t: float = Field(default=0.0, ge=0)
    m1: float = Field(gt=0)
    m2: float = Field(gt=0)


class HjbCheckRequest(BaseModel):
    scenario: Scenario
    grid_b: list[float] | None = None
    grid_c: list[float] | None = None
    probes: list[StateProbe] | None = None
    step: float | None = Field(default=None, gt=0)
    tolerance: float | None = Field(default=None, gt=0)


class ResidualRow(BaseModel):
    s: float
    t: float
    m1: float
    m2: float
    b: float
    c: float
    residual: float


class HjbCheckResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    scenario: Scenario
    kelly: float
    step: float
    tolerance: float
    b_sweep: list[ResidualRow]
    c_sweep: list[ResidualRow]
    max_abs_b_residual: float
    min_c_residual: float
    spurious_c_zeros: list[float]
    constant_candidate_flagged: bool
    passed: bool


class HealthResponse(BaseModel):
    status: str
    version: str
