"""Acceptance criteria, each at its stated tolerance.

Every check records a PASS/FAIL cell; the terminal summary prints one line
per criterion. Cells that cannot be met are left failing, not skipped.
"""
import itertools
import math
import time
from collections import defaultdict

import numpy as np
import pytest

from conftest import one_factor
from dgvar.bounds import chernoff_tail_params, decay_params, log_decay_objective
from dgvar.errors import SchemeTooLarge
from dgvar.fourier import L_TABLE, choose_l, l1_term, l_feasible
from dgvar.montecarlo import (
    McConfig,
    epsilon_experimental,
    epsilon_theoretical,
    mc_var,
    required_samples,
    simulate_delta_v,
)
from dgvar.portfolio import desk_model
from dgvar.spectral import StudentT, spectral_transform
from dgvar.var import normal_cdf_scheme, value_at_risk
from oracles import ORACLE_MODELS

ELAPSED = defaultdict(float)
CHI2_LIKE = ("chi2", "ncx2")


class timed:
    def __init__(self, criterion):
        self.criterion = criterion

    def __enter__(self):
        self.t0 = time.perf_counter()

    def __exit__(self, *exc):
        ELAPSED[self.criterion] += time.perf_counter() - self.t0


def runtime_check(report, criterion, limit):
    spent = ELAPSED[criterion]
    ok = spent < limit
    report(criterion, ok, f"runtime {spent:.1f} s (limit {limit:g} s)")
    assert ok


# 1. certified inversion on the p = 1 oracles

@pytest.mark.parametrize("eps", [1e-2, 1e-4, 1e-6])
@pytest.mark.parametrize("name", ["gaussian", "chi2", "ncx2"])
def test_c1_certified_inversion(name, eps, acceptance_report):
    lam, b, oracle = ORACLE_MODELS[name]
    cell = f"{name} eps={eps:g}"
    with timed(1):
        try:
            probe = normal_cdf_scheme(spectral_transform(one_factor(lam, b)), eps)
        except SchemeTooLarge as exc:
            acceptance_report(1, False, f"{cell}: {exc}")
            raise
        half = probe.scheme.half_range
        xs = np.linspace(-half, half, 101)
        err = float(np.max(np.abs(probe(xs) - np.array([oracle(x) for x in xs]))))
    ok = err <= eps
    acceptance_report(1, ok, f"{cell}: N={probe.scheme.n_terms} max|g-F|={err:.3g}")
    assert ok


def test_c1_runtime(acceptance_report):
    runtime_check(acceptance_report, 1, 10.0)


# 2. VaR certificate, normal path and t path (nu = 1e6)

@pytest.mark.parametrize("eps", [1e-3, 1e-6])
@pytest.mark.parametrize("gamma", [0.01, 0.05, 0.5])
@pytest.mark.parametrize("name", ["gaussian", "chi2", "ncx2"])
def test_c2_var_normal(name, gamma, eps, acceptance_report):
    lam, b, oracle = ORACLE_MODELS[name]
    cell = f"normal {name} gamma={gamma:g} eps={eps:g}"
    with timed(2):
        try:
            res = value_at_risk(one_factor(lam, b), gamma, eps)
        except SchemeTooLarge as exc:
            acceptance_report(2, False, f"{cell}: {exc}")
            raise
    err = abs(oracle(res.x_star) - gamma)
    ok = err <= eps
    acceptance_report(2, ok, f"{cell}: x*={res.x_star:.6g} |P(x*)-gamma|={err:.3g}")
    assert ok


@pytest.mark.parametrize("eps", [1e-3, 1e-6])
@pytest.mark.parametrize("gamma", [0.01, 0.05, 0.5])
@pytest.mark.parametrize("name", CHI2_LIKE)
def test_c2_var_t(name, gamma, eps, acceptance_report):
    lam, b, oracle = ORACLE_MODELS[name]
    model = one_factor(lam, b, dist=StudentT(1e6))
    cell = f"t(1e6) {name} gamma={gamma:g} eps={eps:g}"
    with timed(2):
        try:
            res = value_at_risk(model, gamma, eps)
        except SchemeTooLarge as exc:
            acceptance_report(2, False, f"{cell}: {exc}")
            raise
        m = 10 ** 7
        dv = simulate_delta_v(model, m, seed=2024)
    p_mc = float(np.mean(dv <= res.x_star))
    sigma_mc = math.sqrt(gamma * (1.0 - gamma) / m)
    err = abs(oracle(res.x_star) - gamma)
    ok = err <= eps and abs(p_mc - gamma) <= eps + 3.0 * sigma_mc
    acceptance_report(2, ok, f"{cell}: |P(x*)-gamma|={err:.3g} |P_MC-gamma|={abs(p_mc - gamma):.3g}")
    assert ok


def test_c2_runtime(acceptance_report):
    runtime_check(acceptance_report, 2, 60.0)


# 3. l-table feasibility and choose_l

@pytest.mark.parametrize("alpha,l", L_TABLE)
def test_c3_table_rows(alpha, l, acceptance_report):
    lhs = l ** alpha * l1_term(l, alpha)
    ok = l_feasible(l, alpha) and lhs <= 2.0 ** (alpha + 1)
    acceptance_report(3, ok, f"alpha={alpha:g} l={l}: l^a L1={lhs:.6g} <= {2.0 ** (alpha + 1):g}")
    assert ok


def test_c3_choose_l_random(acceptance_report):
    rng = np.random.default_rng(3)
    alphas = rng.uniform(1.05, 50.0, size=50)
    bad = [a for a in alphas if not l_feasible(choose_l(a), a)]
    ok = not bad
    acceptance_report(3, ok, f"choose_l feasible for {50 - len(bad)}/50 random alpha")
    assert ok


# 4. prefix scan equals exhaustive subset search

def exhaustive(lam, eps):
    nz = [j for j in range(lam.size) if lam[j] != 0.0]
    subsets = (s for k in range(1, len(nz) + 1) for s in itertools.combinations(nz, k))
    return frozenset(min(subsets, key=lambda s: log_decay_objective(lam, s, eps)[0]))


def test_c4_prefix_optimality(acceptance_report):
    rng = np.random.default_rng(4)
    mismatches = 0
    for _ in range(100):
        p = int(rng.integers(1, 9))
        lam = rng.normal(size=p) * np.exp(rng.normal(scale=1.5, size=p))
        eps = 10.0 ** -rng.uniform(0, 8)
        if frozenset(decay_params(lam, eps).subset) != exhaustive(lam, eps):
            mismatches += 1
    ok = mismatches == 0
    acceptance_report(4, ok, f"{100 - mismatches}/100 random spectra match")
    assert ok


# 5. Chernoff closed form

@pytest.mark.parametrize("eps", [1e-2, 1e-3, 1e-4, 1e-5, 1e-6])
def test_c5_chernoff_closed_form(eps, acceptance_report):
    tail = chernoff_tail_params(lambda u: 0.5 * u * u, eps)
    exact = math.sqrt(2.0 * math.log(3.0 / eps))
    rel = abs(tail.u_star - exact) / exact
    ok = rel <= 1e-6
    acceptance_report(5, ok, f"eps={eps:g}: u*={tail.u_star:.9g} rel err {rel:.2g}")
    assert ok


# 6. desk-scale reproduction of the N tables

EPS_DESK = (1e-3, 1e-4, 1e-5, 1e-6)
REF_N = {"normal": (216, 314, 442, 774), "t": (1000, 1508, 2190, 3070)}


@pytest.mark.parametrize("dist", ["normal", "t"])
def test_c6_desk_terms(dist, acceptance_report):
    model = desk_model(0, dist=StudentT(5.0)) if dist == "t" else desk_model(0)
    ns = [value_at_risk(model, 0.01, e).n_terms_used for e in EPS_DESK]
    in_range = all(50 <= n <= 10 * ref for n, ref in zip(ns, REF_N[dist]))
    monotone = all(a <= b for a, b in zip(ns, ns[1:]))
    ok = in_range and monotone and all(math.isfinite(n) for n in ns)
    acceptance_report(6, ok, f"{dist}: N={ns} vs table {list(REF_N[dist])}")
    assert ok


# 7. Monte Carlo calibration

def test_c7_required_samples(acceptance_report):
    m = required_samples(0.01, 1e-3, 0.01)
    ok = 6.4e4 <= m <= 6.7e4
    acceptance_report(7, ok, f"required_samples(0.01, 1e-3, 0.01) = {m}")
    assert ok


@pytest.mark.parametrize("m", [10 ** 3, 10 ** 4])
def test_c7_fig1_agreement(m, acceptance_report):
    model = desk_model(0)
    cfg = McConfig(m, seed=70 + m, repetitions=200, confidence_rho=0.01)
    e_exp = epsilon_experimental(model, 0.01, cfg)
    e_th = epsilon_theoretical(0.01, m, 0.01)
    ratio = e_exp / e_th
    ok = 0.6 <= ratio <= 1.6
    acceptance_report(7, ok, f"M={m}: eps_exp={e_exp:.3g} eps_th={e_th:.3g} ratio={ratio:.3f}")
    assert ok


# 8. speed ordering at eps = 1e-4

def test_c8_fourier_faster_than_mc(acceptance_report):
    model = desk_model(0)
    t0 = time.perf_counter()
    value_at_risk(model, 0.01, 1e-4)
    t_fourier = time.perf_counter() - t0
    m = required_samples(0.01, 1e-4, 0.01)
    t0 = time.perf_counter()
    mc_var(model, 0.01, McConfig(m, seed=8))
    t_mc = time.perf_counter() - t0
    ok = t_fourier < t_mc
    acceptance_report(8, ok, f"Fourier {t_fourier:.3f} s vs MC {t_mc:.2f} s at M={m}")
    assert ok
