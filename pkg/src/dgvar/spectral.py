"""Delta-gamma model container and its reduction to independent factors.

The portfolio change dV = theta*dt + delta'dS + 0.5 dS' Gamma dS with
dS ~ N(0, Sigma) (or multivariate t with scale Sigma) is rewritten as

    dV - theta*dt = sum_j b_j Z_j + 0.5 * sum_j lambda_j Z_j**2

with Z independent standard normals, using C = L O where L L' = Sigma and
O diagonalises L' Gamma L.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import EigenNoConvergence, InvalidModel, NotPositiveDefinite

SYMMETRY_RTOL = 1e-12
JACOBI_RTOL = 1e-13
JACOBI_MAX_SWEEPS = 100
ZERO_EIG_RTOL = 1e-14


@dataclass(frozen=True)
class Normal:
    def __str__(self):
        return "normal"


@dataclass(frozen=True)
class StudentT:
    nu: float

    def __post_init__(self):
        if not self.nu > 0:
            raise InvalidModel(f"degrees of freedom must be positive, got {self.nu}")

    def __str__(self):
        return f"t(nu={self.nu:g})"


Distribution = Union[Normal, StudentT]


def _check_symmetric(name, a):
    scale = np.linalg.norm(a)
    if np.linalg.norm(a - a.T) > SYMMETRY_RTOL * scale:
        raise InvalidModel(f"{name} is not symmetric")


@dataclass(frozen=True, eq=False)
class DeltaGammaModel:
    """Sensitivities of a portfolio plus the law of the risk-factor changes.

    ``sigma`` is the covariance (scale matrix for the t case) of dS over the
    horizon, not an annualised quantity.
    """

    sigma: np.ndarray
    delta: np.ndarray
    gamma_matrix: np.ndarray
    theta: float = 0.0
    dt: float = 1.0
    dist: Distribution = field(default_factory=Normal)

    def __post_init__(self):
        sigma = np.array(self.sigma, dtype=float, ndmin=2)
        gamma = np.array(self.gamma_matrix, dtype=float, ndmin=2)
        delta = np.array(self.delta, dtype=float).reshape(-1)
        p = delta.size
        if p < 1:
            raise InvalidModel("model needs at least one risk factor")
        if sigma.shape != (p, p) or gamma.shape != (p, p):
            raise InvalidModel(
                f"shape mismatch: delta has {p} entries, sigma {sigma.shape}, "
                f"gamma {gamma.shape}"
            )
        if not (np.all(np.isfinite(sigma)) and np.all(np.isfinite(gamma))
                and np.all(np.isfinite(delta))):
            raise InvalidModel("model contains non-finite entries")
        if not self.dt > 0:
            raise InvalidModel(f"horizon dt must be positive, got {self.dt}")
        _check_symmetric("sigma", sigma)
        _check_symmetric("gamma", gamma)
        for arr in (sigma, gamma, delta):
            arr.setflags(write=False)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "gamma_matrix", gamma)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "dt", float(self.dt))

    @property
    def p(self) -> int:
        return self.delta.size

    @property
    def shift(self) -> float:
        """Deterministic part theta*dt of dV."""
        return self.theta * self.dt


@dataclass(frozen=True, eq=False)
class SpectralData:
    lam: np.ndarray
    b: np.ndarray
    c_matrix: np.ndarray

    @property
    def p(self) -> int:
        return self.lam.size

    @property
    def nonzero(self) -> np.ndarray:
        return self.lam != 0.0

    def mean(self) -> float:
        return 0.5 * float(np.sum(self.lam))

    def variance(self) -> float:
        return float(np.sum(self.b ** 2) + 0.5 * np.sum(self.lam ** 2))


def cholesky(sigma) -> np.ndarray:
    """Lower-triangular L with L L' = sigma (Cholesky-Banachiewicz)."""
    a = np.array(sigma, dtype=float, ndmin=2)
    p = a.shape[0]
    if a.shape != (p, p):
        raise NotPositiveDefinite(f"expected a square matrix, got shape {a.shape}")
    L = np.zeros_like(a)
    for i in range(p):
        for j in range(i + 1):
            s = a[i, j] - np.dot(L[i, :j], L[j, :j])
            if i == j:
                if not s > 0.0:
                    raise NotPositiveDefinite(f"pivot {i} is {s:.3g}")
                L[i, i] = math.sqrt(s)
            else:
                L[i, j] = s / L[j, j]
    return L


def jacobi_eigh(a, rtol=JACOBI_RTOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi eigen-decomposition of a symmetric matrix.

    Returns ``(w, V)`` with ``a = V diag(w) V'`` and V orthogonal. Columns are
    in the original (unsorted) order.
    """
    A = np.array(a, dtype=float, ndmin=2)
    p = A.shape[0]
    V = np.eye(p)
    target = rtol * np.linalg.norm(A)

    mask = ~np.eye(p, dtype=bool)

    def off(m):
        return float(np.linalg.norm(m[mask]))

    for _ in range(max_sweeps):
        if off(A) <= target:
            return np.diag(A).copy(), V
        for i in range(p - 1):
            for j in range(i + 1, p):
                aij = A[i, j]
                if aij == 0.0:
                    continue
                diff = A[j, j] - A[i, i]
                if abs(diff) > 1e150 * abs(aij):
                    t = aij / diff  # theta would overflow; tan(phi) ~ 1/(2 theta)
                else:
                    theta = diff / (2.0 * aij)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                ci, cj = A[:, i].copy(), A[:, j].copy()
                A[:, i] = c * ci - s * cj
                A[:, j] = s * ci + c * cj
                ri, rj = A[i, :].copy(), A[j, :].copy()
                A[i, :] = c * ri - s * rj
                A[j, :] = s * ri + c * rj
                A[i, j] = A[j, i] = 0.0
                vi, vj = V[:, i].copy(), V[:, j].copy()
                V[:, i] = c * vi - s * vj
                V[:, j] = s * vi + c * vj
    if off(A) <= target:
        return np.diag(A).copy(), V
    raise EigenNoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")


def spectral_transform(model: DeltaGammaModel) -> SpectralData:
    """Eigenvalues of Sigma*Gamma and loadings b = C' delta.

    Eigenvalues come out sorted by descending |lambda| (ties: larger signed
    value first, then original index) and those below 1e-14 * max|lambda| are
    set to exactly zero.
    """
    L = cholesky(model.sigma)
    S = L.T @ model.gamma_matrix @ L
    S = 0.5 * (S + S.T)
    w, O = jacobi_eigh(S)
    order = sorted(range(w.size), key=lambda k: (-abs(w[k]), -w[k], k))
    w = w[order]
    O = O[:, order]
    top = np.max(np.abs(w))
    w = np.where(np.abs(w) <= ZERO_EIG_RTOL * top, 0.0, w)
    C = L @ O
    b = C.T @ model.delta
    for arr in (w, b, C):
        arr.setflags(write=False)
    return SpectralData(lam=w, b=b, c_matrix=C)
