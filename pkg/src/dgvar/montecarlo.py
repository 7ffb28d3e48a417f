"""Monte Carlo benchmark: order-statistic VaR and its accuracy calibration.

Samples are drawn in fixed-size chunks, each from its own Philox stream
spawned from the seed, so results depend only on (inputs, seed) and not on
the number of worker threads (``DGVAR_THREADS``).
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .errors import SampleTooSmall, TooFewRepetitions
from .spectral import DeltaGammaModel, StudentT, cholesky
from .var import StudentTCdf, normal_cdf_scheme, spectral_transform

CHUNK = 1 << 16
CALIBRATION_EPS = 1e-9


@dataclass(frozen=True)
class McConfig:
    sample_count: int
    seed: int = 0
    repetitions: int = 1
    confidence_rho: float = 0.01

    def __post_init__(self):
        if self.sample_count < 1 or self.repetitions < 1:
            raise ValueError("sample_count and repetitions must be >= 1")
        if not 0.0 < self.confidence_rho < 1.0:
            raise ValueError("confidence_rho must lie in (0, 1)")


def threads():
    try:
        return max(1, int(os.environ.get("DGVAR_THREADS", "")))
    except ValueError:
        return os.cpu_count() or 1


def _streams(seed, m):
    n_chunks = -(-m // CHUNK)
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    children = ss.spawn(n_chunks)
    sizes = [min(CHUNK, m - i * CHUNK) for i in range(n_chunks)]
    return list(zip(children, sizes))


def _chunk_samples(L, nu, child, size):
    rng = np.random.Generator(np.random.Philox(child))
    z = rng.standard_normal((size, L.shape[0])) @ L.T
    if nu is not None:
        w = 2.0 * rng.standard_gamma(0.5 * nu, size=size)
        z /= np.sqrt(w / nu)[:, None]
    return z


def _map_chunks(fn, jobs):
    n = threads()
    if n == 1 or len(jobs) == 1:
        return [fn(*job) for job in jobs]
    with ThreadPoolExecutor(n) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))


def _sample(sigma, nu, m, seed):
    L = cholesky(sigma)
    p = L.shape[0]
    if m == 0:
        return np.empty((0, p))
    parts = _map_chunks(lambda c, s: _chunk_samples(L, nu, c, s), _streams(seed, m))
    return np.concatenate(parts, axis=0)


def sample_normal(sigma, m, seed=0):
    """m draws of N(0, sigma) as an (m, p) array."""
    return _sample(sigma, None, m, seed)


def sample_student_t(sigma, nu, m, seed=0):
    """m draws of the multivariate t with scale sigma and nu degrees of freedom."""
    return _sample(sigma, float(nu), m, seed)


def delta_v(model: DeltaGammaModel, sample):
    """theta*dt + delta'dS + 0.5 dS' Gamma dS, row-wise for a 2-d sample."""
    s = np.asarray(sample, dtype=float)
    quad = np.sum((s @ model.gamma_matrix) * s, axis=-1)
    return model.shift + s @ model.delta + 0.5 * quad


def simulate_delta_v(model: DeltaGammaModel, m, seed=0):
    """m draws of dV without materialising the full (m, p) sample."""
    L = cholesky(model.sigma)
    nu = model.dist.nu if isinstance(model.dist, StudentT) else None
    if m == 0:
        return np.empty(0)
    parts = _map_chunks(lambda c, s: delta_v(model, _chunk_samples(L, nu, c, s)),
                        _streams(seed, m))
    return np.concatenate(parts)


def order_index(m, gamma):
    """ceil(m * gamma), robust to the product being an integer up to rounding."""
    prod = m * gamma
    k = math.ceil(prod)
    if k - prod > 1.0 - 1e-9 * max(1.0, prod):
        k -= 1
    return k


def mc_var(model: DeltaGammaModel, gamma, config: McConfig, seed=None):
    """The ceil(M gamma)-th order statistic of M simulated dV values."""
    m = config.sample_count
    k = order_index(m, gamma)
    if k < 1 or k > m:
        raise SampleTooSmall(f"ceil(M*gamma)={k} is outside 1..{m}")
    dv = np.sort(simulate_delta_v(model, m, config.seed if seed is None else seed))
    return float(dv[k - 1])


def _z(rho):
    return float(ndtri(1.0 - 0.5 * rho))


def required_samples(gamma, epsilon, rho):
    return int(math.ceil(_z(rho) ** 2 * gamma * (1.0 - gamma) / epsilon ** 2))


def epsilon_theoretical(gamma, m, rho):
    return _z(rho) * math.sqrt(gamma * (1.0 - gamma) / m)


def confidence_indices(r, rho):
    """1-based (floor(rho R / 2), ceil((1 - rho/2) R))."""
    lo = math.floor(rho * r / 2.0 + 1e-9)
    hi = math.ceil((1.0 - rho / 2.0) * r - 1e-9)
    return lo, hi


def mc_estimates(model, gamma, config: McConfig):
    """R independent order-statistic estimates x*_1..x*_R (unsorted)."""
    seeds = np.random.SeedSequence(config.seed).spawn(config.repetitions)
    return np.array([mc_var(model, gamma, config, seed=s) for s in seeds])


def confidence_levels(model: DeltaGammaModel, xs, epsilon=CALIBRATION_EPS):
    """gamma* = P(x) for each x, computed with the Fourier method."""
    xs = np.asarray(xs, dtype=float) - model.shift
    spec = spectral_transform(model)
    if isinstance(model.dist, StudentT):
        p_of = StudentTCdf(spec, model.dist.nu, epsilon)
        return np.array([p_of(x) for x in xs])
    probe = normal_cdf_scheme(spec, epsilon)
    width = 2.0 * float(np.max(np.abs(xs))) * (1.0 + 1e-9)
    if width > probe.scheme.d_range:
        probe = normal_cdf_scheme(spec, epsilon, d_range=width)
    return probe(xs)


def epsilon_experimental(model: DeltaGammaModel, gamma, config: McConfig,
                         cdf_epsilon=CALIBRATION_EPS):
    """Half-spread of the empirical gamma* distribution at confidence 1 - rho."""
    lo, hi = confidence_indices(config.repetitions, config.confidence_rho)
    if lo < 1:
        raise TooFewRepetitions(
            f"floor(rho*R/2) = {lo}: need R >= {math.ceil(2 / config.confidence_rho)}")
    levels = np.sort(confidence_levels(model, mc_estimates(model, gamma, config), cdf_epsilon))
    return 0.5 * (levels[hi - 1] - levels[lo - 1])
