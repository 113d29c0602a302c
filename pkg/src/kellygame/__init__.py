"""Continuous-time two-player trading game toolkit.

Closed-form payoff kernels and growth rates, the Kelly equilibrium and
best responses, seeded Monte Carlo verification, fair-randomization
phi-games, and finite-difference PDE residual checks, plus a FastAPI
service and a CLI wrapping all of it.
"""

from .analytics import (
    LogWealthLaw,
    PayoffValue,
    growth_rate,
    log_ratio_law,
    log_wealth_law,
    norm_cdf,
    payoff_kernel,
    win_probability,
)
from .errors import (
    DimensionMismatch,
    DivisionDegenerate,
    DomainViolation,
    InvalidCorrelation,
    KellyGameError,
    NonPositiveVolatility,
    SingularCovariance,
    TimeOffGrid,
)
from .hjb import (
    CandidateValueFn,
    MutualBestResponseReport,
    StatePoint,
    WEALTH_RATIO,
    hjb_rhs,
    verify_mutual_best_response,
)
from .market import (
    MarketParams,
    RebalancingRule,
    as_rule_weights,
    build_market,
    shannon_demon_market,
)
from .phigame import (
    FairRandomization,
    IDENTITY,
    INDICATOR,
    LOG,
    PhiFunction,
    PhiGameEstimate,
    Theorem1Report,
    investment_phi_game_payoff,
    phi_by_name,
    point_mass,
    primitive_game_payoff,
    theorem1_check,
    uniform_0_2,
)
from .simulate import (
    MonteCarloEstimate,
    PathBatch,
    PlayTrajectory,
    SimConfig,
    estimate_expected_ratio,
    estimate_win_probability,
    sample_play,
    simulate_paths,
)
from .solver import (
    BestResponseReport,
    GameSolution,
    ResponseKind,
    SaddleReport,
    best_response_p1,
    best_response_p2,
    kelly_rule,
    solve_game,
    verify_saddle,
)

__version__ = "0.1.0"

__all__ = [
    "BestResponseReport",
    "CandidateValueFn",
    "DimensionMismatch",
    "DivisionDegenerate",
    "DomainViolation",
    "FairRandomization",
    "GameSolution",
    "IDENTITY",
    "INDICATOR",
    "InvalidCorrelation",
    "KellyGameError",
    "LOG",
    "LogWealthLaw",
    "MarketParams",
    "MonteCarloEstimate",
    "MutualBestResponseReport",
    "NonPositiveVolatility",
    "PathBatch",
    "PayoffValue",
    "PhiFunction",
    "PhiGameEstimate",
    "PlayTrajectory",
    "RebalancingRule",
    "ResponseKind",
    "SaddleReport",
    "SimConfig",
    "SingularCovariance",
    "StatePoint",
    "Theorem1Report",
    "TimeOffGrid",
    "WEALTH_RATIO",
    "as_rule_weights",
    "best_response_p1",
    "best_response_p2",
    "build_market",
    "estimate_expected_ratio",
    "estimate_win_probability",
    "growth_rate",
    "hjb_rhs",
    "investment_phi_game_payoff",
    "kelly_rule",
    "log_ratio_law",
    "log_wealth_law",
    "norm_cdf",
    "payoff_kernel",
    "phi_by_name",
    "point_mass",
    "primitive_game_payoff",
    "sample_play",
    "shannon_demon_market",
    "simulate_paths",
    "solve_game",
    "theorem1_check",
    "uniform_0_2",
    "verify_mutual_best_response",
    "verify_saddle",
    "win_probability",
]
