"""Closed-form characteristic and moment generating functions of dV.

Normal risk factors:

    phi(u) = exp(-0.5 * sum_j b_j^2 u^2 / (1 - i lam_j u)) * prod_j (1 - i lam_j u)^(-1/2)

Multivariate t risk factors with nu degrees of freedom: P(dV <= x) = F_x(0),
where F_x has characteristic function

    phi_x(u) = (1 - 2 xi(u))^(-nu/2) * prod_j (1 - i lam_j u)^(-1/2)
    xi(u)    = -i u x / nu - (1 / (2 nu)) * sum_j b_j^2 u^2 / (1 - i lam_j u)

F_x is the law of Y_x = s b'Z + 0.5 Z' Lam Z - x s^2 with s^2 ~ chi2_nu / nu.

All functions accept scalars or 1-d arrays of u. MGFs return ``inf`` outside
their domain of finiteness; that is a value, not an error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import SpectralData

_BISECT_STEPS = 200


def _clog1p(w):
    # log(1 + w) for complex w, accurate when |w| is tiny (large nu).
    re = np.real(w)
    im = np.imag(w)
    return 0.5 * np.log1p(2.0 * re + re * re + im * im) + 1j * np.arctan2(im, 1.0 + re)


def _as_grid(u):
    u = np.asarray(u, dtype=float)
    return u, u.reshape(-1, 1)


def _log_phi2(spec, col):
    # sum_j log(1 - i lam_j u), principal branch factor by factor (Re = 1 > 0).
    z = 1.0 - 1j * col * spec.lam
    return z, np.sum(np.log(z), axis=1)


def _quad_part(spec, col, z):
    # sum_j b_j^2 u^2 / (1 - i lam_j u)
    return np.sum(spec.b ** 2 * col ** 2 / z, axis=1)


def normal_cf(spec: SpectralData, u):
    u, col = _as_grid(u)
    z, log2 = _log_phi2(spec, col)
    out = np.exp(-0.5 * _quad_part(spec, col, z) - 0.5 * log2)
    out = np.where(col[:, 0] == 0.0, 1.0 + 0.0j, out)
    return out.reshape(u.shape) if u.ndim else complex(out[0])


def normal_log_mgf(spec: SpectralData, u):
    u, col = _as_grid(u)
    t = col * spec.lam
    ok = np.all(t < 1.0, axis=1)
    tt = np.where(t < 1.0, t, 0.0)
    val = 0.5 * np.sum(spec.b ** 2 * col ** 2 / (1.0 - tt), axis=1) \
        - 0.5 * np.sum(np.log1p(-tt), axis=1)
    out = np.where(ok, val, np.inf)
    return out.reshape(u.shape) if u.ndim else float(out[0])


def normal_mgf(spec: SpectralData, u):
    return np.exp(normal_log_mgf(spec, u))


def _t_xi(spec, nu, x, col, z):
    return -1j * col[:, 0] * x / nu - _quad_part(spec, col, z) / (2.0 * nu)


def t_cf(cf: "CharFnStudentT", u):
    spec, nu, x = cf.spec, cf.nu, cf.x
    u, col = _as_grid(u)
    z, log2 = _log_phi2(spec, col)
    xi = _t_xi(spec, nu, x, col, z)
    out = np.exp(-0.5 * nu * _clog1p(-2.0 * xi) - 0.5 * log2)
    out = np.where(col[:, 0] == 0.0, 1.0 + 0.0j, out)
    return out.reshape(u.shape) if u.ndim else complex(out[0])


def _t_xi_real(spec, nu, x, col, tt):
    # xi(-iu) in real arithmetic
    return -col[:, 0] * x / nu + np.sum(spec.b ** 2 * col ** 2 / (1.0 - tt), axis=1) / (2.0 * nu)


def t_log_mgf(cf: "CharFnStudentT", u):
    spec, nu, x = cf.spec, cf.nu, cf.x
    u, col = _as_grid(u)
    t = col * spec.lam
    ok = np.all(t < 1.0, axis=1)
    tt = np.where(t < 1.0, t, 0.0)
    with np.errstate(over="ignore", invalid="ignore"):
        xi = _t_xi_real(spec, nu, x, col, tt)
    ok &= xi < 0.5
    xi = np.where(ok, xi, 0.0)
    val = -0.5 * nu * np.log1p(-2.0 * xi) - 0.5 * np.sum(np.log1p(-tt), axis=1)
    out = np.where(ok, val, np.inf)
    return out.reshape(u.shape) if u.ndim else float(out[0])


def t_mgf(cf: "CharFnStudentT", u):
    return np.exp(t_log_mgf(cf, u))


def _lam_edges(lam):
    pos = lam[lam > 0]
    neg = lam[lam < 0]
    hi = 1.0 / pos.max() if pos.size else math.inf
    lo = 1.0 / neg.min() if neg.size else -math.inf
    return lo, hi


def _edge(finite, limit):
    """Boundary of {u in (0, limit): finite(u)}, assumed to be an interval (0, e)."""
    if math.isinf(limit):
        hi = 1.0
        while finite(hi):
            hi *= 2.0
            if hi > 1e300:
                return math.inf
        lo = 0.0
    else:
        hi = limit
        lo = 0.0
        if finite(limit * (1.0 - 1e-15)):
            return limit
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if finite(mid):
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return hi


@dataclass(frozen=True, eq=False)
class CharFnNormal:
    spec: SpectralData

    def cf(self, u):
        return normal_cf(self.spec, u)

    def log_mgf(self, u):
        return normal_log_mgf(self.spec, u)

    def mgf(self, u):
        return normal_mgf(self.spec, u)

    def mgf_domain(self):
        """Open interval (lo, hi) around 0 on which the MGF is finite."""
        return _lam_edges(self.spec.lam)

    def scale(self):
        return math.sqrt(self.spec.variance() + self.spec.mean() ** 2)


@dataclass(frozen=True, eq=False)
class CharFnStudentT:
    spec: SpectralData
    nu: float
    x: float = 0.0

    def __post_init__(self):
        if not self.nu > 0:
            raise ValueError(f"nu must be positive, got {self.nu}")

    def cf(self, u):
        return t_cf(self, u)

    def log_mgf(self, u):
        return t_log_mgf(self, u)

    def mgf(self, u):
        return t_mgf(self, u)

    def at(self, x):
        return CharFnStudentT(self.spec, self.nu, float(x))

    def mgf_domain(self):
        lo, hi = _lam_edges(self.spec.lam)
        up = _edge(lambda v: math.isfinite(self.log_mgf(v)), hi)
        down = _edge(lambda v: math.isfinite(self.log_mgf(-v)), -lo)
        return -down, up

    def scale(self):
        # rough spread of Y_x, used only to place the Chernoff search grid
        spec, nu, x = self.spec, self.nu, self.x
        var = float(np.sum(spec.b ** 2)) + 0.5 * float(np.sum(spec.lam ** 2)) + 2.0 * x * x / nu
        return math.sqrt(var + (spec.mean() - x) ** 2)
