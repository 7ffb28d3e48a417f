"""Certified constants for the Fourier-series inversion.

Two kinds of constants are needed:

* a polynomial tail envelope ``F(-y) <= A y**-alpha`` and
  ``1 - F(y) <= A y**-alpha`` for y > 0, obtained from Chernoff's bound
  with the tangency construction, and
* a decay envelope ``|phi(u)| <= B |u / 2pi|**-beta``, obtained from the
  eigenvalues through the best prefix of the |lambda|-sorted spectrum.

MGFs are handled on the log scale throughout; ``inf`` marks the outside of
the MGF domain.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AllEigenvaluesZero, EmptyDomain, ToleranceTooLoose

MAX_EPSILON = 0.1
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_SCAN_POINTS = 64


def check_epsilon(epsilon):
    if not 0.0 < epsilon < MAX_EPSILON:
        raise ToleranceTooLoose(f"epsilon must lie in (0, {MAX_EPSILON}), got {epsilon}")


@dataclass(frozen=True)
class TailBoundParams:
    a_const: float
    alpha: float
    u_star: float
    log_a: float

    def envelope(self, y):
        y = np.asarray(y, dtype=float)
        return np.exp(self.log_a - self.alpha * np.log(y))


@dataclass(frozen=True)
class DecayBoundParams:
    b_const: float
    beta: float
    subset: tuple
    log_b: float

    def envelope(self, u):
        u = np.abs(np.asarray(u, dtype=float))
        return np.exp(self.log_b - self.beta * np.log(u / (2.0 * math.pi)))


def psi_tilde(mgf, u):
    """max(psi(u), psi(-u)); ``inf`` if either side is outside the domain."""
    return max(float(mgf(u)), float(mgf(-u)))


def log_psi_tilde(log_mgf, u):
    return max(float(log_mgf(u)), float(log_mgf(-u)))


def golden_section(f, a, b, rtol=1e-12, max_iter=300):
    """Minimiser of a unimodal f on [a, b]."""
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= rtol * max(abs(b), abs(a)):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return c if fc <= fd else d


def chernoff_objective(log_mgf, epsilon):
    """u -> log(3 psi~(u) / eps) / u, the cost (3A/eps)**(1/alpha) for fixed u."""
    const = math.log(3.0 / epsilon)

    def h(u):
        if not u > 0.0:
            return math.inf
        return (const + log_psi_tilde(log_mgf, u)) / u

    return h


def tail_params_at(log_mgf, u, epsilon) -> TailBoundParams:
    """The tangency solution alpha(u), A(u) for a fixed Chernoff exponent u."""
    lp = log_psi_tilde(log_mgf, u)
    if not math.isfinite(lp):
        raise EmptyDomain(f"psi~({u:.6g}) is infinite")
    alpha = math.log(3.0 / epsilon) + lp
    log_a = lp - alpha + alpha * math.log(alpha / u)
    return TailBoundParams(
        a_const=math.exp(log_a) if log_a < 700 else math.inf,
        alpha=alpha,
        u_star=u,
        log_a=log_a,
    )


def _scan_grid(u_max, scale, u_seed):
    if math.isfinite(u_max):
        left = np.geomspace(1e-6 * u_max, 0.5 * u_max, _SCAN_POINTS // 2)
        right = u_max * (1.0 - np.geomspace(0.5, 1e-9, _SCAN_POINTS // 2 + 1)[1:])
        grid = np.concatenate([left, right])
    else:
        grid = np.geomspace(1e-3 / scale, 1e3 / scale, _SCAN_POINTS)
    if u_seed is not None and 0.0 < u_seed < u_max:
        grid = np.append(grid, u_seed)
    return np.unique(grid)


def chernoff_tail_params(log_mgf, epsilon, u_max=math.inf, scale=1.0, u_seed=None):
    """Minimise log(3 psi~(u)/eps)/u over 0 < u < u_max and return (A, alpha).

    ``u_max`` is the edge of the domain of psi~ (``inf`` if unbounded),
    ``scale`` a rough spread of the distribution used to place the search
    grid, ``u_seed`` an optional warm start from a neighbouring problem.
    """
    check_epsilon(epsilon)
    h = chernoff_objective(log_mgf, epsilon)
    grid = _scan_grid(u_max, scale, u_seed)
    vals = np.array([h(u) for u in grid])
    if not np.any(np.isfinite(vals)):
        raise EmptyDomain("psi~ is infinite at every probed u > 0")
    if math.isinf(u_max):
        # unbounded domain: make sure the minimum is interior
        while int(np.argmin(vals)) == grid.size - 1:
            more = grid[-1] * np.geomspace(2.0, 1e3, 10)
            grid = np.concatenate([grid, more])
            vals = np.concatenate([vals, [h(u) for u in more]])
    i = int(np.argmin(vals))
    a = grid[i - 1] if i > 0 else 0.5 * grid[0]
    if i < grid.size - 1:
        b = grid[i + 1]
    else:
        b = u_max * (1.0 - 1e-9)
    u = golden_section(h, a, b)
    if h(u) > vals[i]:
        u = float(grid[i])
    return tail_params_at(log_mgf, float(u), epsilon)


def tail_params_for(charfn, epsilon, u_seed=None) -> TailBoundParams:
    """Chernoff constants for a charfn object exposing log_mgf/mgf_domain/scale."""
    lo, hi = charfn.mgf_domain()
    return chernoff_tail_params(
        charfn.log_mgf, epsilon, u_max=min(hi, -lo), scale=charfn.scale(), u_seed=u_seed
    )


def _sorted_nonzero(lam):
    lam = np.asarray(lam, dtype=float)
    idx = [k for k in range(lam.size) if lam[k] != 0.0]
    return sorted(idx, key=lambda k: (-abs(lam[k]), -lam[k], k))


def log_decay_objective(lam, subset, epsilon):
    """log of (6 B_I / (pi eps beta_I))**(1/beta_I)."""
    beta = len(subset) / 2.0
    log_b = -beta * math.log(2.0 * math.pi) - 0.5 * sum(math.log(abs(lam[j])) for j in subset)
    return (math.log(6.0 / (math.pi * epsilon * beta)) + log_b) / beta, log_b


def decay_params(lam, epsilon) -> DecayBoundParams:
    """Best subset I for |phi(u)| <= B_I |u/2pi|^(-|I|/2), scanned over prefixes."""
    if not epsilon > 0.0:
        raise ToleranceTooLoose(f"epsilon must be positive, got {epsilon}")
    lam = np.asarray(lam, dtype=float)
    order = _sorted_nonzero(lam)
    if not order:
        raise AllEigenvaluesZero("no nonzero eigenvalue: no polynomial decay bound")
    best = None
    for k in range(1, len(order) + 1):
        subset = tuple(order[:k])
        obj, log_b = log_decay_objective(lam, subset, epsilon)
        if best is None or obj < best[0]:
            best = (obj, subset, log_b)
    _, subset, log_b = best
    return DecayBoundParams(
        b_const=math.exp(log_b), beta=len(subset) / 2.0, subset=subset, log_b=log_b
    )


def gaussian_decay_params(b, lam, epsilon) -> DecayBoundParams:
    """Decay envelope from the Gaussian factor exp(-c u^2), c = sum_{lam_j=0} b_j^2 / 2.

    Uses sup_u |u|^beta exp(-c u^2) = (beta / (2 c e))^(beta/2), with beta
    chosen to minimise the scheme cost. Needed when every eigenvalue is 0.
    """
    b = np.asarray(b, dtype=float)
    lam = np.asarray(lam, dtype=float)
    c = 0.5 * float(np.sum(b[lam == 0.0] ** 2))
    if not c > 0.0:
        raise AllEigenvaluesZero("no Gaussian component to bound the decay")
    log_6pe = math.log(6.0 / (math.pi * epsilon))

    def log_b_of(beta):
        return -beta * math.log(2.0 * math.pi) + 0.5 * beta * math.log(beta / (2.0 * c * math.e))

    def obj(beta):
        return (log_6pe - math.log(beta) + log_b_of(beta)) / beta

    grid = np.geomspace(1e-2, 1e3, 200)
    vals = np.array([obj(x) for x in grid])
    i = int(np.argmin(vals))
    beta = golden_section(obj, grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)])
    log_b = log_b_of(beta)
    return DecayBoundParams(b_const=math.exp(log_b), beta=beta, subset=(), log_b=log_b)
