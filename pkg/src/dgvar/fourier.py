"""Truncated Fourier-series inversion of a characteristic function with a
guaranteed error bound.

Given tail constants (A, alpha) and decay constants (B, beta), the series

    g(x) = 1/2 + 2 * sum_{k=1}^{N/2-1} Re(G[k] exp(i 2 pi k x / T)),
    G[k] = (1 - cos(2 pi l k)) / (i 2 pi k) * phi(-2 pi k / T)

satisfies |F(x) - g(x)| <= 2 B T^beta / pi * zeta(beta + 1, N/2)
+ A T^-alpha * L1(l, alpha) on |x| <= l T / 2. Parameters are chosen so the
right-hand side is at most eps on |x| <= D / 2.

``zeta(z, a)`` here is sum_{k>=1} (k + a)^-z, i.e. the usual Hurwitz zeta
shifted by one in ``a``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import DecayBoundParams, TailBoundParams, check_epsilon
from .errors import InvalidExponent, OutOfRange, SchemeTooLarge

DEFAULT_MAX_TERMS = 2 ** 24

# (alpha, l) pairs recommended for the l-condition
L_TABLE = (
    (1.125, 0.0855),
    (1.25, 0.1874),
    (1.5, 0.3530),
    (2.0, 0.4666),
    (3.0, 0.4955),
    (4.0, 0.4991),
    (5.0, 0.4998),
    (10.0, 0.5000),
)

_L_SHRINK = 0.9
_ZETA_RTOL = 1e-13
_EVAL_BLOCK = 1 << 22

# B_2, B_4, ..., B_30
_BERNOULLI = (
    1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510,
    43867 / 798, -174611 / 330, 854513 / 138, -236364091 / 2730, 8553103 / 6,
    -23749461029 / 870, 8615841276005 / 14322,
)
_EM_TERMS = 12


def _em_tail(z, w):
    """Euler-Maclaurin estimate of sum_{n>=0} (w + n)^-z and a bound on its error."""
    total = w ** (1.0 - z) / (z - 1.0) + 0.5 * w ** (-z)
    rising = z  # (z)_{2j-1}
    fact = 2.0  # (2j)!
    term = 0.0
    for j in range(1, _EM_TERMS + 2):
        term = _BERNOULLI[j - 1] * rising / fact * w ** (-z - 2 * j + 1)
        if j == _EM_TERMS + 1:
            break
        total += term
        rising *= (z + 2 * j - 1) * (z + 2 * j)
        fact *= (2 * j + 1) * (2 * j + 2)
    return total, 2.0 * abs(term)


def hurwitz_zeta_with_error(z, a, tol=1e-15):
    """Return (value, error_bound) for sum_{k>=1} (k + a)^-z with error_bound <= tol."""
    if not z > 1.0:
        raise InvalidExponent(f"zeta needs z > 1, got {z}")
    if not a > -1.0:
        raise ValueError(f"zeta needs a > -1, got {a}")
    K = max(1, int(math.ceil(2.0 + z - a)))
    while True:
        tail, err = _em_tail(z, K + a)
        if err <= tol or K > 1 << 24:
            break
        K *= 2
    if err > tol:
        raise ArithmeticError(f"zeta({z}, {a}) did not reach tolerance {tol}")
    ks = np.arange(1, K, dtype=float)
    head = math.fsum(((ks + a) ** (-z))[::-1]) if K > 1 else 0.0
    value = head + tail
    return value, err + 4e-16 * abs(value)


def hurwitz_zeta(z, a, tol=1e-15):
    return hurwitz_zeta_with_error(z, a, tol)[0]


def _zeta_rel(z, a):
    # tolerance relative to the first term, hence relative to the value
    return hurwitz_zeta_with_error(z, a, _ZETA_RTOL * (1.0 + a) ** (-z))


def _l1_zetas(l, alpha):
    """2 zeta(a, 1-l/2) + zeta(a, 1+l/2) + zeta(a, 1-3l/2) and its error bound."""
    parts = [
        (2.0, _zeta_rel(alpha, 1.0 - 0.5 * l)),
        (1.0, _zeta_rel(alpha, 1.0 + 0.5 * l)),
        (1.0, _zeta_rel(alpha, 1.0 - 1.5 * l)),
    ]
    value = sum(w * v for w, (v, _) in parts)
    err = sum(w * e for w, (_, e) in parts)
    return value, err


def l1_term(l, alpha):
    """L1(l, alpha) = (l/2)^-alpha + 2 zeta(alpha, 1-l/2) + zeta(alpha, 1+l/2) + zeta(alpha, 1-3l/2)."""
    if not 0.0 < l < 2.0 / 3.0:
        raise ValueError(f"l must lie in (0, 2/3), got {l}")
    if not alpha > 1.0:
        raise InvalidExponent(f"alpha must exceed 1, got {alpha}")
    z, _ = _l1_zetas(l, alpha)
    return (0.5 * l) ** (-alpha) + z


def l1_upper(l, alpha):
    z, err = _l1_zetas(l, alpha)
    return (0.5 * l) ** (-alpha) + z + err


def l_feasible(l, alpha):
    """Rigorous check of l^alpha * L1(l, alpha) <= 2^(alpha + 1).

    Dividing by 2^alpha turns it into (l/2)^alpha * Z <= 1 with Z the zeta
    part of L1; that form cannot overflow for large alpha.
    """
    if not 0.0 < l < 2.0 / 3.0:
        return False
    z, err = _l1_zetas(l, alpha)
    return math.exp(alpha * math.log(0.5 * l)) * (z + err) <= 1.0


def table_l(alpha):
    """Starting guess for l: interpolated table value."""
    alphas = [a for a, _ in L_TABLE]
    ls = [v for _, v in L_TABLE]
    if alpha > alphas[-1]:
        return ls[-1]
    if alpha < alphas[0]:
        return ls[0] * alpha / alphas[0]
    return float(np.interp(alpha, alphas, ls))


def choose_l(alpha):
    """A verified-feasible l for the given alpha (shrinks the table guess until feasible)."""
    if not alpha > 1.0:
        raise InvalidExponent(f"alpha must exceed 1, got {alpha}")
    l = table_l(alpha)
    while not l_feasible(l, alpha):
        l *= _L_SHRINK
    return l


@dataclass(frozen=True, eq=False)
class FourierScheme:
    l: float
    t_period: float
    n_terms: int
    coeffs: np.ndarray
    certified_eps: float
    d_range: float
    bound: float

    @property
    def half_range(self):
        return 0.5 * self.d_range


def scheme_size(tail: TailBoundParams, decay: DecayBoundParams, d_range, epsilon):
    """(l, T, N_min) from the sufficient conditions, before rounding N."""
    l = choose_l(tail.alpha)
    log_t_tail = math.log(2.0 / l) + (math.log(3.0) + tail.log_a - math.log(epsilon)) / tail.alpha
    t_period = max(d_range / l, math.exp(log_t_tail)) * (1.0 + 1e-12)
    log_factor = (math.log(6.0) + decay.log_b - math.log(epsilon * math.pi * decay.beta)) / decay.beta
    n_min = 2.0 + 2.0 * t_period * math.exp(log_factor)
    return l, t_period, n_min


def error_terms(l, t_period, n_terms, tail: TailBoundParams, decay: DecayBoundParams):
    """The truncation term and the aliasing term of the error bound."""
    zeta, zerr = _zeta_rel(decay.beta + 1.0, 0.5 * n_terms)
    trunc = math.exp(math.log(2.0 / math.pi) + decay.log_b + decay.beta * math.log(t_period)) \
        * (zeta + zerr)
    alias = math.exp(tail.log_a - tail.alpha * math.log(t_period)) * l1_upper(l, tail.alpha)
    return trunc, alias


def error_bound(scheme: FourierScheme, tail, decay):
    trunc, alias = error_terms(scheme.l, scheme.t_period, scheme.n_terms, tail, decay)
    return trunc + alias


def _cf_callable(cf):
    return cf.cf if hasattr(cf, "cf") else cf


def build_scheme(cf, tail: TailBoundParams, decay: DecayBoundParams, d_range, epsilon,
                 max_terms=DEFAULT_MAX_TERMS) -> FourierScheme:
    """Choose (l, T, N) for accuracy ``epsilon`` on |x| <= d_range/2 and compute G[k]."""
    check_epsilon(epsilon)
    if not d_range > 0.0:
        raise ValueError(f"d_range must be positive, got {d_range}")
    phi = _cf_callable(cf)
    l, t_period, n_min = scheme_size(tail, decay, d_range, epsilon)
    for _ in range(8):
        if not (math.isfinite(n_min) and n_min <= max_terms):
            raise SchemeTooLarge(n_min, max_terms)
        n_terms = max(4, 2 * int(math.ceil(0.5 * n_min)))
        bound = sum(error_terms(l, t_period, n_terms, tail, decay))
        if bound <= epsilon:
            break
        # only reachable through rounding in the bound evaluation
        n_min = n_min * (1.0 + 1e-6) + 2.0
    else:
        raise ArithmeticError("could not certify the error bound")
    k = np.arange(1, n_terms // 2, dtype=float)
    win = 2.0 * np.sin(math.pi * l * k) ** 2
    coeffs = win / (2j * math.pi * k) * np.asarray(phi(-2.0 * math.pi * k / t_period))
    coeffs.setflags(write=False)
    return FourierScheme(
        l=l,
        t_period=t_period,
        n_terms=n_terms,
        coeffs=coeffs,
        certified_eps=epsilon,
        d_range=d_range,
        bound=bound,
    )


def evaluate_g(scheme: FourierScheme, x):
    """The truncated series at x (scalar or array); |x| must not exceed D/2."""
    xs = np.asarray(x, dtype=float)
    flat = xs.reshape(-1)
    lim = scheme.half_range * (1.0 + 1e-12)
    if flat.size and np.max(np.abs(flat)) > lim:
        raise OutOfRange(
            f"x={flat[np.argmax(np.abs(flat))]:.6g} outside the certified range "
            f"+-{scheme.half_range:.6g}"
        )
    g = scheme.coeffs
    k = np.arange(1, g.size + 1, dtype=float)
    w = 2.0 * math.pi * flat / scheme.t_period
    total = np.zeros(flat.size)
    block = max(1, _EVAL_BLOCK // max(flat.size, 1))
    for s in range(0, g.size, block):
        ang = np.outer(w, k[s:s + block])
        total += np.cos(ang) @ g.real[s:s + block] - np.sin(ang) @ g.imag[s:s + block]
    out = 0.5 + 2.0 * total
    return out.reshape(xs.shape) if xs.ndim else float(out[0])
