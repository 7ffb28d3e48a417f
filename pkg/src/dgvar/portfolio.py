"""Simulated market-maker book of vanilla options, aggregated to delta/gamma.

Spots are normalised to 1, so dS is the horizon return, Sigma holds annual
return variances and the greeks are already in return coordinates. Options
are priced with Black-Scholes at zero rate and volatility sqrt(Sigma_ii).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .spectral import DeltaGammaModel, Distribution, Normal


@dataclass(frozen=True)
class OptionSpec:
    underlying_index: int  # 1-based
    is_call: bool
    is_long: bool
    maturity: float
    moneyness: float
    nominal: float


@dataclass(frozen=True)
class PortfolioConfig:
    option_count: int = 10_000
    underlying_count: int = 30
    dt: float = 10.0 / 252.0
    variance_range: tuple = (0.1 ** 2, 0.3 ** 2)
    maturity_range: tuple = (10.0 / 252.0, 1.0)
    moneyness_mean: float = 1.0
    moneyness_sd: float = 0.1
    moneyness_bounds: tuple = (0.5, 1.5)
    nominal_range: tuple = (1e4, 1e5)
    seed: int = 0

    def __post_init__(self):
        if self.option_count < 0 or self.underlying_count < 1:
            raise ValueError("option_count must be >= 0 and underlying_count >= 1")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        for name in ("variance_range", "maturity_range", "moneyness_bounds", "nominal_range"):
            lo, hi = getattr(self, name)
            if not 0 < lo <= hi:
                raise ValueError(f"{name} must be positive and ordered, got {(lo, hi)}")
        if not self.moneyness_sd > 0:
            raise ValueError("moneyness_sd must be positive")


def _truncated_normal(rng, n, mean, sd, lo, hi):
    out = np.empty(n)
    filled = 0
    while filled < n:
        draw = rng.normal(mean, sd, size=n - filled)
        keep = draw[(draw >= lo) & (draw <= hi)]
        out[filled:filled + keep.size] = keep
        filled += keep.size
    return out


def simulate_portfolio(config: PortfolioConfig = PortfolioConfig()):
    """Draw the options and the diagonal annual covariance Sigma.

    Returns ``(options, sigma)`` where sigma is the (underlying_count x
    underlying_count) diagonal matrix; the horizon covariance is dt * sigma.
    """
    rng = np.random.default_rng(config.seed)
    n, p = config.option_count, config.underlying_count
    variances = rng.uniform(*config.variance_range, size=p)
    under = rng.integers(1, p + 1, size=n)
    is_call = rng.random(n) < 0.5
    is_long = rng.random(n) < 0.5
    maturity = rng.uniform(*config.maturity_range, size=n)
    moneyness = _truncated_normal(rng, n, config.moneyness_mean, config.moneyness_sd,
                                  *config.moneyness_bounds)
    nominal = rng.uniform(*config.nominal_range, size=n)
    options = [
        OptionSpec(int(under[i]), bool(is_call[i]), bool(is_long[i]), float(maturity[i]),
                   float(moneyness[i]), float(nominal[i]))
        for i in range(n)
    ]
    return options, np.diag(variances)


def bs_greeks(opt: OptionSpec, vol, tau=None):
    """(delta, gamma) of the position at spot 1, strike = moneyness, rate 0."""
    tau = opt.maturity if tau is None else tau
    sd = vol * math.sqrt(tau)
    d1 = (math.log(1.0 / opt.moneyness) + 0.5 * sd * sd) / sd
    nd1 = float(ndtr(d1))
    delta = nd1 if opt.is_call else nd1 - 1.0
    gamma = math.exp(-0.5 * d1 * d1) / math.sqrt(2.0 * math.pi) / sd
    sign = 1.0 if opt.is_long else -1.0
    return sign * opt.nominal * delta, sign * opt.nominal * gamma


def aggregate(options, sigma, config: PortfolioConfig = PortfolioConfig(),
              dist: Distribution = Normal()) -> DeltaGammaModel:
    """Sum greeks per underlying; the model covariance is dt * sigma."""
    sigma = np.asarray(sigma, dtype=float)
    p = sigma.shape[0]
    vols = np.sqrt(np.diag(sigma))
    delta = np.zeros(p)
    gamma = np.zeros(p)
    for opt in options:
        j = opt.underlying_index - 1
        d, g = bs_greeks(opt, vols[j])
        delta[j] += d
        gamma[j] += g
    return DeltaGammaModel(
        sigma=config.dt * sigma,
        delta=delta,
        gamma_matrix=np.diag(gamma),
        theta=0.0,
        dt=config.dt,
        dist=dist,
    )


def desk_model(seed=0, dist: Distribution = Normal(), **overrides) -> DeltaGammaModel:
    config = PortfolioConfig(seed=seed, **overrides)
    options, sigma = simulate_portfolio(config)
    return aggregate(options, sigma, config, dist=dist)
