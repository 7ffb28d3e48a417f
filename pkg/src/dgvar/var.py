"""Value-at-risk and CDF values of a delta-gamma portfolio, with certificates.

``value_at_risk`` returns x* with |P(x*) - gamma| <= epsilon, where P is the
exact CDF of dV. Half of the budget goes to the Fourier scheme and half to
the root search.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from .bounds import (
    check_epsilon,
    decay_params,
    gaussian_decay_params,
    tail_params_for,
)
from .charfn import CharFnNormal, CharFnStudentT
from .errors import AllEigenvaluesZero, DegenerateModel, ToleranceTooLoose
from .fourier import DEFAULT_MAX_TERMS, FourierScheme, build_scheme, evaluate_g
from .spectral import DeltaGammaModel, SpectralData, StudentT, spectral_transform

MAX_BISECTIONS = 200
_MAX_ENLARGE = 20


@dataclass(frozen=True)
class VarResult:
    x_star: float
    gamma: float
    epsilon: float
    n_terms_used: int
    cf_evals: int
    dist: str


def check_levels(gamma, epsilon):
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    check_epsilon(epsilon)
    if epsilon >= 0.5 * min(gamma, 1.0 - gamma):
        raise ToleranceTooLoose(
            f"epsilon={epsilon} must be below min(gamma, 1-gamma)/2 = "
            f"{0.5 * min(gamma, 1.0 - gamma)}"
        )


def tail_range(tail, level):
    """D such that the Chernoff envelope certifies F(-D/2), 1-F(D/2) <= level."""
    return 2.0 * math.exp((tail.log_a - math.log(level)) / tail.alpha)


def _all_zero(spec: SpectralData):
    return not np.any(spec.nonzero)


def _gaussian_sd(spec: SpectralData):
    sd = math.sqrt(float(np.sum(spec.b ** 2)))
    if sd == 0.0:
        raise DegenerateModel("dV is constant: delta and gamma are both zero")
    return sd


def _normal_decay(spec, epsilon):
    if _all_zero(spec):
        _gaussian_sd(spec)
        return gaussian_decay_params(spec.b, spec.lam, epsilon)
    return decay_params(spec.lam, epsilon)


@dataclass(frozen=True, eq=False)
class NormalCdf:
    """A built scheme for the normal case; evaluates P(x) - theta*dt offsets excluded."""

    scheme: FourierScheme
    tail: object
    decay: object

    def __call__(self, x):
        return evaluate_g(self.scheme, x)


def normal_cdf_scheme(spec: SpectralData, epsilon, d_range=None, level=None,
                      max_terms=DEFAULT_MAX_TERMS) -> NormalCdf:
    """Scheme for F = P (theta = 0) with accuracy epsilon on |x| <= d_range/2.

    Without ``d_range`` the range is the one outside of which the Chernoff
    envelope leaves at most ``level`` (default epsilon) of mass on each side.
    """
    check_epsilon(epsilon)
    cf = CharFnNormal(spec)
    tail = tail_params_for(cf, epsilon)
    decay = _normal_decay(spec, epsilon)
    if d_range is None:
        d_range = tail_range(tail, epsilon if level is None else level)
    scheme = build_scheme(cf, tail, decay, d_range, epsilon, max_terms=max_terms)
    return NormalCdf(scheme, tail, decay)


def _bisect(f, lo, hi, f_lo, f_hi, target, tol):
    """Bisection for f(x) = target on [lo, hi] until |f - target| <= tol."""
    evals = 0
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        evals += 1
        if abs(fm - target) <= tol:
            return mid, evals
        if fm < target:
            lo, f_lo = mid, fm
        else:
            hi, f_hi = mid, fm
    # bracket collapsed onto a jump of the approximant; P is continuous there
    return 0.5 * (lo + hi), evals


def var_normal(model: DeltaGammaModel, gamma, epsilon, max_terms=DEFAULT_MAX_TERMS) -> VarResult:
    if isinstance(model.dist, StudentT):
        raise TypeError("var_normal needs a model with normal risk factors")
    check_levels(gamma, epsilon)
    spec = spectral_transform(model)
    if _all_zero(spec):
        sd = _gaussian_sd(spec)
        x0 = sd * float(ndtri(gamma))
        return VarResult(x0 + model.shift, gamma, epsilon, 0, 0, str(model.dist))
    half = 0.5 * epsilon
    cf = CharFnNormal(spec)
    tail = tail_params_for(cf, half)
    decay = decay_params(spec.lam, half)
    d_range = tail_range(tail, 0.5 * min(gamma, 1.0 - gamma))
    cf_evals = 0
    for _ in range(_MAX_ENLARGE):
        scheme = build_scheme(cf, tail, decay, d_range, half, max_terms=max_terms)
        cf_evals += scheme.coeffs.size
        g_lo = evaluate_g(scheme, -scheme.half_range)
        g_hi = evaluate_g(scheme, scheme.half_range)
        if g_lo < gamma < g_hi:
            break
        d_range *= 2.0
    else:
        raise ArithmeticError("could not bracket the quantile")
    x0, _ = _bisect(lambda v: evaluate_g(scheme, v), -scheme.half_range, scheme.half_range,
                    g_lo, g_hi, gamma, half)
    return VarResult(x0 + model.shift, gamma, epsilon, scheme.n_terms, cf_evals, str(model.dist))


class StudentTCdf:
    """P(x) = F_x(0) with a fresh scheme per x; reuses (B, beta) and warm-starts u*."""

    def __init__(self, spec: SpectralData, nu, epsilon, max_terms=DEFAULT_MAX_TERMS):
        if _all_zero(spec):
            raise AllEigenvaluesZero(
                "t-distributed factors with Gamma = 0 are not supported")
        check_epsilon(epsilon)
        self.base = CharFnStudentT(spec, float(nu), 0.0)
        self.epsilon = epsilon
        self.decay = decay_params(spec.lam, epsilon)
        self.max_terms = max_terms
        self.u_seed = None
        self.cf_evals = 0
        self.last_scheme = None

    def scheme_at(self, x) -> FourierScheme:
        cf = self.base.at(x)
        tail = tail_params_for(cf, self.epsilon, u_seed=self.u_seed)
        self.u_seed = tail.u_star
        # only g(0) is needed; this D does not enlarge T
        d_range = 2.0 * math.exp((math.log(3.0) + tail.log_a - math.log(self.epsilon)) / tail.alpha)
        scheme = build_scheme(cf, tail, self.decay, d_range, self.epsilon,
                              max_terms=self.max_terms)
        self.cf_evals += scheme.coeffs.size
        self.last_scheme = scheme
        return scheme

    def __call__(self, x):
        return evaluate_g(self.scheme_at(x), 0.0)


def var_student_t(model: DeltaGammaModel, gamma, epsilon,
                  max_terms=DEFAULT_MAX_TERMS) -> VarResult:
    if not isinstance(model.dist, StudentT):
        raise TypeError("var_student_t needs a model with t risk factors")
    check_levels(gamma, epsilon)
    spec = spectral_transform(model)
    half = 0.5 * epsilon
    p_of = StudentTCdf(spec, model.dist.nu, half, max_terms=max_terms)
    nu = model.dist.nu
    infl = math.sqrt(nu / (nu - 2.0)) if nu > 2.0 else 3.0
    sd = math.sqrt(spec.variance()) * infl
    x0 = spec.mean() + sd * float(ndtri(gamma))
    step = sd * max(1.0, abs(float(ndtri(gamma))))
    lo, hi = x0 - step, x0 + step
    f_lo, f_hi = p_of(lo), p_of(hi)
    for _ in range(64):
        if f_lo < gamma:
            break
        lo, step = lo - step, 2.0 * step
        f_lo = p_of(lo)
    for _ in range(64):
        if f_hi > gamma:
            break
        hi, step = hi + step, 2.0 * step
        f_hi = p_of(hi)
    if not f_lo < gamma < f_hi:
        raise ArithmeticError("could not bracket the quantile")
    x_star, _ = _bisect(p_of, lo, hi, f_lo, f_hi, gamma, half)
    n_terms = p_of.last_scheme.n_terms
    return VarResult(x_star + model.shift, gamma, epsilon, n_terms, p_of.cf_evals,
                     str(model.dist))


def value_at_risk(model: DeltaGammaModel, gamma, epsilon, **kw) -> VarResult:
    if isinstance(model.dist, StudentT):
        return var_student_t(model, gamma, epsilon, **kw)
    return var_normal(model, gamma, epsilon, **kw)


def cdf(model: DeltaGammaModel, x, epsilon, max_terms=DEFAULT_MAX_TERMS):
    """P(dV <= x) to within epsilon through the Fourier series."""
    check_epsilon(epsilon)
    spec = spectral_transform(model)
    x0 = float(x) - model.shift
    if isinstance(model.dist, StudentT):
        return StudentTCdf(spec, model.dist.nu, epsilon, max_terms=max_terms)(x0)
    probe = normal_cdf_scheme(spec, epsilon, max_terms=max_terms)
    if abs(x0) <= probe.scheme.half_range:
        return probe(x0)
    wide = normal_cdf_scheme(spec, epsilon, d_range=2.0 * abs(x0) * (1.0 + 1e-9),
                             max_terms=max_terms)
    return wide(x0)


def gaussian_cdf(model: DeltaGammaModel, x):
    """Exact P(dV <= x) when Gamma = 0 (dV Gaussian)."""
    spec = spectral_transform(model)
    if not _all_zero(spec):
        raise ValueError("model is not Gaussian")
    return float(ndtr((x - model.shift) / _gaussian_sd(spec)))
