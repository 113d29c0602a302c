"""Market definition: a riskless bond plus n correlated stocks in geometric Brownian motion.

Every other module consumes the validated :class:`MarketParams` built here.
The covariance matrix is assembled from volatilities and correlations,
checked for positive definiteness via a Cholesky factorization, and the
factor is kept on the object so the equilibrium solver and the path
sampler never refactorize.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidCorrelation,
    NonPositiveVolatility,
    SingularCovariance,
)

# Cholesky pivot acceptance: pivot > _PIVOT_RTOL * max diagonal of the covariance.
_PIVOT_RTOL = 1e-10
# Symmetry / unit-diagonal tolerance for user-supplied correlation matrices.
_CORR_ATOL = 1e-12


def _as_vector(x, name: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.ndim != 1:
        raise DimensionMismatch(f"{name} must be a scalar or 1-d vector, got shape {arr.shape}")
    if arr.size == 0:
        raise DimensionMismatch(f"{name} must have at least one entry")
    if not np.all(np.isfinite(arr)):
        raise DimensionMismatch(f"{name} contains non-finite entries")
    return arr


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class MarketParams:
    """Validated market parameters, immutable after construction.

    Attributes
    ----------
    r : float
        Risk-free rate per unit time.
    mu : ndarray, shape (n,)
        Drift vector per unit time.
    sigma : ndarray, shape (n,)
        Volatilities per unit time^(1/2), all positive.
    rho : ndarray, shape (n, n)
        Instantaneous correlation matrix of the driving Brownian motions.
    cov : ndarray, shape (n, n)
        Covariance of instantaneous returns per unit time,
        cov[i, j] = rho[i, j] * sigma[i] * sigma[j]. Symmetric positive definite.
    chol : ndarray, shape (n, n)
        Lower-triangular Cholesky factor of ``cov``; reused for linear solves
        and for correlating path increments.

    All arrays are read-only; instances are safe to share across tasks.
    """

    r: float
    mu: np.ndarray
    sigma: np.ndarray
    rho: np.ndarray
    cov: np.ndarray
    chol: np.ndarray

    @property
    def n(self) -> int:
        """Number of stocks."""
        return self.mu.shape[0]

    @property
    def excess(self) -> np.ndarray:
        """Excess drift vector mu - r*1."""
        return self.mu - self.r

    @property
    def chol_rho(self) -> np.ndarray:
        """Lower-triangular Cholesky factor of the correlation matrix.

        Derived from the covariance factor: cov = D rho D with
        D = diag(sigma), so chol(rho) = D^(-1) chol(cov).
        """
        return self.chol / self.sigma[:, None]


@dataclass(frozen=True, eq=False)
class RebalancingRule:
    """Constant portfolio weight vector.

    ``weights[i]`` is the wealth fraction continuously held in stock i; the
    remainder ``1 - sum(weights)`` sits in the bond. Weights are unrestricted
    in sign and size (leverage and shorting allowed).
    """

    weights: np.ndarray

    def __post_init__(self):
        w = _as_vector(self.weights, "weights")
        object.__setattr__(self, "weights", _frozen(w))

    @property
    def n(self) -> int:
        return self.weights.shape[0]


def as_rule_weights(market: MarketParams, rule) -> np.ndarray:
    """Coerce ``rule`` (RebalancingRule, scalar, or sequence) to a validated weight vector.

    Raises DimensionMismatch if the length does not match the market's n.
    """
    if isinstance(rule, RebalancingRule):
        w = rule.weights
    else:
        w = _as_vector(rule, "rule")
    if w.shape != (market.n,):
        raise DimensionMismatch(
            f"rule has {w.shape[0]} weights but the market has {market.n} stocks"
        )
    return np.asarray(w, dtype=float)


def _validate_correlation(rho: np.ndarray, n: int) -> np.ndarray:
    if rho.shape != (n, n):
        raise DimensionMismatch(f"rho must be {n}x{n}, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise InvalidCorrelation("rho contains non-finite entries")
    asym = np.abs(rho - rho.T)
    if asym.max() > _CORR_ATOL:
        i, j = np.unravel_index(np.argmax(asym), asym.shape)
        raise InvalidCorrelation(f"rho is asymmetric at ({i}, {j}): {rho[i, j]} vs {rho[j, i]}")
    diag_err = np.abs(np.diagonal(rho) - 1.0)
    if diag_err.max() > _CORR_ATOL:
        i = int(np.argmax(diag_err))
        raise InvalidCorrelation(f"rho diagonal entry ({i}, {i}) is {rho[i, i]}, expected 1")
    if np.abs(rho).max() > 1.0 + _CORR_ATOL:
        i, j = np.unravel_index(np.argmax(np.abs(rho)), rho.shape)
        raise InvalidCorrelation(f"rho entry ({i}, {j}) = {rho[i, j]} lies outside [-1, 1]")
    # Symmetrize exactly so cov == cov.T holds bit-for-bit downstream.
    return (rho + rho.T) / 2.0


def _cholesky_pd(cov: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor of ``cov``; SingularCovariance if any pivot is too small."""
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise SingularCovariance(f"covariance is not positive definite: {exc}") from exc
    pivots = np.diagonal(chol) ** 2
    floor = _PIVOT_RTOL * float(np.max(np.diagonal(cov)))
    if pivots.min() <= floor:
        i = int(np.argmin(pivots))
        raise SingularCovariance(
            f"covariance pivot {i} = {pivots[i]:.3e} below tolerance {floor:.3e}"
        )
    return chol


def build_market(r: float, mu, sigma, rho=None) -> MarketParams:
    """Build and validate a market.

    Parameters
    ----------
    r : float
        Risk-free rate per unit time.
    mu : float or sequence
        Drift per unit time; scalars embed as n = 1.
    sigma : float or sequence
        Volatilities, all entries > 0.
    rho : matrix, optional
        Correlation matrix; defaults to the identity (uncorrelated stocks).

    Raises
    ------
    DimensionMismatch, NonPositiveVolatility, InvalidCorrelation, SingularCovariance
    """
    mu_v = _as_vector(mu, "mu")
    sigma_v = _as_vector(sigma, "sigma")
    if mu_v.shape != sigma_v.shape:
        raise DimensionMismatch(
            f"mu has length {mu_v.shape[0]} but sigma has length {sigma_v.shape[0]}"
        )
    if not math.isfinite(float(r)):
        raise DimensionMismatch("r must be finite")
    if np.any(sigma_v <= 0.0):
        i = int(np.argmin(sigma_v))
        raise NonPositiveVolatility(f"sigma[{i}] = {sigma_v[i]} must be > 0")
    n = mu_v.shape[0]
    rho_m = np.eye(n) if rho is None else np.asarray(rho, dtype=float)
    rho_m = _validate_correlation(rho_m, n)
    cov = rho_m * np.outer(sigma_v, sigma_v)
    chol = _cholesky_pd(cov)
    return MarketParams(
        r=float(r),
        mu=_frozen(mu_v),
        sigma=_frozen(sigma_v),
        rho=_frozen(rho_m),
        cov=_frozen(cov),
        chol=_frozen(chol),
    )


def shannon_demon_market() -> MarketParams:
    """The classic volatility-harvesting scenario: zero-interest cash plus one
    stock with sigma = ln 2 and drift sigma^2 / 2.

    Its equilibrium rebalancing rule is the half-stock, half-cash split.
    """
    sigma = math.log(2.0)
    return build_market(r=0.0, mu=sigma * sigma / 2.0, sigma=sigma, rho=[[1.0]])
