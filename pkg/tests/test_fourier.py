import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import one_factor
from dgvar.errors import InvalidExponent, OutOfRange, SchemeTooLarge
from dgvar.fourier import (
    L_TABLE,
    build_scheme,
    choose_l,
    error_bound,
    error_terms,
    evaluate_g,
    hurwitz_zeta,
    hurwitz_zeta_with_error,
    l1_term,
    l_feasible,
    scheme_size,
)
from dgvar.spectral import DeltaGammaModel, spectral_transform
from dgvar.var import normal_cdf_scheme
from oracles import chi2_cdf, normal_cdf


def test_zeta_examples():
    # zeta(z, a) sums from k = 1, so a = 0 is the Riemann zeta value
    assert hurwitz_zeta(2.0, 0.0) == pytest.approx(math.pi ** 2 / 6, rel=1e-14)
    assert hurwitz_zeta(2.0, 1.0) == pytest.approx(math.pi ** 2 / 6 - 1, rel=1e-14)
    assert hurwitz_zeta(4.0, 0.0) == pytest.approx(math.pi ** 4 / 90, rel=1e-14)
    assert hurwitz_zeta(2.0, 0.0) == pytest.approx(1.644934, abs=1e-6)


@pytest.mark.parametrize("z,a", [(1.5, 0.3), (2.0, 0.7), (3.7, 2.5), (1.25, 0.0)])
def test_zeta_against_partial_sum(z, a):
    k_max = 10 ** 7
    k = np.arange(1, k_max + 1, dtype=float)
    partial = math.fsum(((k + a) ** -z)[::-1])
    # the remaining terms lie between the integrals from K+1 and from K
    tail_lo = (k_max + 1 + a) ** (1 - z) / (z - 1)
    tail_hi = (k_max + a) ** (1 - z) / (z - 1)
    tol = 1e-12
    val, err = hurwitz_zeta_with_error(z, a, tol)
    assert err <= tol
    mid = partial + 0.5 * (tail_lo + tail_hi)
    assert abs(val - mid) <= tol + 0.5 * (tail_hi - tail_lo)


def test_zeta_large_shift_matches_scipy():
    from scipy.special import zeta
    for z, a in [(1.5, 1e6), (2.0, 3.5e4), (11.0, 0.5)]:
        assert hurwitz_zeta(z, a) == pytest.approx(zeta(z, a + 1.0), rel=1e-13)


def test_l1_small_l_limit():
    for alpha in (1.5, 2.0, 5.0):
        l = 1e-6
        assert l ** alpha * l1_term(l, alpha) == pytest.approx(2 ** alpha, rel=1e-5)


@pytest.mark.parametrize("alpha,l", L_TABLE)
def test_table_rows_feasible(alpha, l):
    assert l_feasible(l, alpha)
    assert l ** alpha * l1_term(l, alpha) <= 2 ** (alpha + 1)


def test_choose_l_examples():
    assert choose_l(2.0) == 0.4666
    assert choose_l(10.0) == 0.5
    assert choose_l(16.013) == 0.5
    with pytest.raises(InvalidExponent):
        choose_l(1.0)


@given(st.floats(1.0001, 200.0))
@settings(max_examples=80, deadline=None)
def test_choose_l_feasible(alpha):
    l = choose_l(alpha)
    assert 0 < l < 2 / 3
    assert l_feasible(l, alpha)


def random_model(seed, p):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(p, p))
    g = rng.normal(size=(p, p))
    return DeltaGammaModel(a @ a.T + 0.2 * np.eye(p), rng.normal(size=p), g + g.T)


@given(st.integers(0, 10_000), st.integers(3, 8), st.sampled_from([1e-2, 1e-4, 1e-6]))
@settings(max_examples=25, deadline=None)
def test_scheme_invariants(seed, p, eps):
    probe = normal_cdf_scheme(spectral_transform(random_model(seed, p)), eps)
    s, tail, decay = probe.scheme, probe.tail, probe.decay
    assert s.n_terms % 2 == 0 and s.n_terms >= 4
    assert s.coeffs.size == s.n_terms // 2 - 1
    assert l_feasible(s.l, tail.alpha)
    assert s.t_period >= s.d_range / s.l
    assert s.t_period >= (2 / s.l) * (3 * tail.a_const / eps) ** (1 / tail.alpha)
    assert s.n_terms >= 2 + 2 * s.t_period * (6 * decay.b_const / (eps * math.pi * decay.beta)) ** (1 / decay.beta)
    assert error_bound(s, tail, decay) <= eps
    assert s.bound <= eps


def test_error_term_scalings():
    probe = normal_cdf_scheme(spectral_transform(random_model(5, 4)), 1e-4)
    s, tail, decay = probe.scheme, probe.tail, probe.decay
    t1, a1 = error_terms(s.l, s.t_period, s.n_terms, tail, decay)
    t2, _ = error_terms(s.l, s.t_period, 2 * s.n_terms, tail, decay)
    assert t2 < t1
    _, a3 = error_terms(s.l, 2 * s.t_period, s.n_terms, tail, decay)
    assert a3 / a1 == pytest.approx(2.0 ** -tail.alpha, rel=1e-12)


def test_cost_monotone_in_eps():
    spec = spectral_transform(random_model(9, 5))
    ns = [normal_cdf_scheme(spec, e).scheme.n_terms for e in (1e-3, 1e-4, 1e-5, 1e-6)]
    assert ns == sorted(ns)


def test_scheme_too_large():
    probe = normal_cdf_scheme(spectral_transform(random_model(1, 3)), 1e-3)
    with pytest.raises(SchemeTooLarge) as info:
        build_scheme(lambda u: np.ones_like(u, dtype=complex), probe.tail, probe.decay,
                     probe.scheme.d_range, 1e-3, max_terms=8)
    assert info.value.n_required > 8


def test_evaluate_g_gaussian_examples():
    probe = normal_cdf_scheme(spectral_transform(one_factor(0.0, 1.0)), 1e-4)
    eps = probe.scheme.certified_eps
    assert abs(evaluate_g(probe.scheme, 0.0) - 0.5) <= eps
    assert abs(evaluate_g(probe.scheme, -2.3263) - 0.01) <= eps + 1e-5
    assert abs(evaluate_g(probe.scheme, -2.3263) - normal_cdf(-2.3263)) <= eps


def test_evaluate_g_chi2_median():
    # dV = dS^2 with Sigma = 1, Gamma = 2; its median is the chi2_1 median 0.45494
    probe = normal_cdf_scheme(spectral_transform(one_factor(2.0, 0.0)), 1e-2)
    g = evaluate_g(probe.scheme, 0.4549)
    assert abs(g - 0.5) <= 1e-2 + 1e-4
    assert abs(g - chi2_cdf(0.4549, 1)) <= 1e-2


def test_evaluate_g_vectorised_and_deterministic():
    probe = normal_cdf_scheme(spectral_transform(random_model(3, 4)), 1e-5)
    xs = np.linspace(-probe.scheme.half_range, probe.scheme.half_range, 17)
    vec = evaluate_g(probe.scheme, xs)
    one = np.array([evaluate_g(probe.scheme, x) for x in xs])
    np.testing.assert_allclose(vec, one, rtol=0, atol=1e-14)
    np.testing.assert_array_equal(vec, evaluate_g(probe.scheme, xs))


def test_out_of_range():
    probe = normal_cdf_scheme(spectral_transform(one_factor(0.0, 1.0)), 1e-3)
    with pytest.raises(OutOfRange):
        evaluate_g(probe.scheme, probe.scheme.half_range * 1.01)


def test_scheme_size_matches_build():
    probe = normal_cdf_scheme(spectral_transform(random_model(2, 5)), 1e-4)
    l, t, n_min = scheme_size(probe.tail, probe.decay, probe.scheme.d_range, 1e-4)
    assert l == probe.scheme.l and t == probe.scheme.t_period
    assert probe.scheme.n_terms == max(4, 2 * math.ceil(n_min / 2))
