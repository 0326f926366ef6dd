import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as sp_integrate

from ppra import expsums
from ppra.arith import sieve_lambda
from ppra.expsums import (ExpSumContext, QuadSpec, QuadratureError,
                          SamplingError, integrate)
from ppra.representation import rep_single_bruteforce
from ppra.special import gamma_k


@pytest.fixture(scope="module")
def ctx2():
    return ExpSumContext.build(2000, 2)


def _direct_s(ctx, alpha):
    n = ctx.n_vals.astype(np.float64)
    return complex(np.sum(ctx.weights * np.exp(2j * np.pi * (n ** ctx.k) * alpha)))


def test_truncation_index():
    assert expsums.truncation_index(100, 2) == 71  # 71^2 = 5041 >= 5000 > 70^2
    assert expsums.truncation_index(8, 3, trunc_tau=1.0) == 2
    assert expsums.truncation_index(9, 3, trunc_tau=1.0) == 3


def test_truncation_tail_negligible(ctx2):
    assert expsums.truncation_tail(ctx2) < 1e-15 * abs(expsums.s_tilde(ctx2, 0.0))


@given(st.floats(min_value=-0.5, max_value=0.5))
def test_s_tilde_small_frequencies_direct(alpha):
    ctx = ExpSumContext.build(50, 2)
    assert expsums.s_tilde(ctx, alpha) == pytest.approx(_direct_s(ctx, alpha),
                                                        abs=1e-9)


def test_s_tilde_conjugate_symmetry(ctx2):
    a = np.linspace(0.0, 0.5, 101)
    np.testing.assert_allclose(expsums.s_tilde(ctx2, -a),
                               np.conj(expsums.s_tilde(ctx2, a)), atol=1e-9)


def test_s_tilde_periodic(ctx2):
    a = np.array([0.1, 0.23, 0.37])
    np.testing.assert_allclose(expsums.s_tilde(ctx2, a - 1.0),
                               expsums.s_tilde(ctx2, a), atol=1e-9)


def test_s_tilde_workers_identical(ctx2):
    a = np.linspace(-0.5, 0.5, 3 * expsums.GRID_CHUNK + 5)
    assert np.array_equal(expsums.s_tilde(ctx2, a, workers=1),
                          expsums.s_tilde(ctx2, a, workers=3))


def test_s_tilde_grid_matches_points(ctx2):
    m = 997
    np.testing.assert_allclose(expsums.s_tilde_grid(ctx2, m),
                               expsums.s_tilde(ctx2, np.arange(m) / m), atol=1e-9)


@settings(max_examples=50)
@given(st.floats(min_value=-0.5, max_value=0.5), st.integers(1, 500))
def test_u_sum_direct(alpha, h):
    terms = np.exp(2j * np.pi * np.arange(1, h + 1) * alpha)
    direct = complex(math.fsum(terms.real), math.fsum(terms.imag))
    assert expsums.u_sum(alpha, h) == pytest.approx(direct, abs=1e-9 * h)


def test_u_sum_at_integers():
    assert expsums.u_sum(0.0, 17) == 17
    assert expsums.u_sum(1.0, 17) == 17
    with pytest.raises(ValueError):
        expsums.u_sum(0.1, 0)


def test_e_tilde_small_near_zero():
    ctx = ExpSumContext.build(10**6, 2)
    main = gamma_k(2) * 1000
    assert abs(expsums.e_tilde(ctx, 0.0)) < 0.01 * main


def test_bound_grids_include_zero():
    u = expsums.check_u_bound(1000, 100)
    z = expsums.check_z_bound(1000, 100)
    assert u.passed and z.passed
    assert u.max_ratio == pytest.approx(1.0)


def test_quadrature_against_scipy():
    spec = QuadSpec(max_frequency=10)
    f = lambda a: np.exp(-a * a) * np.cos(20 * np.pi * a)
    val, err = integrate(f, -0.5, 0.5, spec)
    ref, _ = sp_integrate.quad(lambda a: math.exp(-a * a) * math.cos(20 * math.pi * a),
                               -0.5, 0.5, limit=200, epsabs=1e-14)
    assert val.real == pytest.approx(ref, abs=1e-12)
    assert err < 1e-12


def test_quadrature_simpson_rule_and_errors():
    spec = QuadSpec(max_frequency=1, rule="simpson")
    val, _ = integrate(np.cos, 0.0, math.pi / 2, spec)
    assert val.real == pytest.approx(1.0, abs=1e-9)
    assert integrate(np.cos, 1.0, 1.0, spec) == (0j, 0.0)
    with pytest.raises(QuadratureError):
        integrate(lambda a: np.exp(2j * np.pi * 1e4 * a), 0, 1,
                  QuadSpec(max_frequency=1), panels=2, rtol=1e-12)
    with pytest.raises(ValueError):
        QuadSpec(max_frequency=1, panels_per_period=4)
    with pytest.raises(ValueError):
        QuadSpec(max_frequency=1, rule="trapezoid")


def test_laplace_check_single():
    c = expsums.laplace_check(1000, 1000, 1.5, 0.5)
    assert c.passed
    assert c.closed_form == pytest.approx(
        math.exp(-1) * math.sqrt(1000) / math.gamma(1.5))


def test_mt_sum_geometric():
    c = expsums.mt_sum_check(1000, 50, 0.0)
    assert c.exact_sum == pytest.approx(expsums.mt_geometric(1000, 50), rel=1e-13)
    with pytest.raises(ValueError):
        expsums.mt_sum_check(1000, 2000, 0.0)


def test_l2_quadrature_matches_closed_form():
    ctx = ExpSumContext.build(200, 2)
    for tau in (0.01, 0.1, 0.5):
        exact = expsums.l2_s_tilde_exact(ctx, tau)
        quad = expsums.l2_s_tilde(ctx, tau)
        assert quad == pytest.approx(exact, rel=1e-8)
    # full period: orthogonality leaves the squared weights
    assert expsums.l2_s_tilde_exact(ctx, 0.5) == pytest.approx(
        float(np.sum(ctx.weights ** 2)), rel=1e-12)


def test_l2_e_tilde_and_shapes():
    ctx = ExpSumContext.build(200, 2)
    assert expsums.l2_e_tilde(ctx, 0.0) == 0.0
    assert expsums.l2_e_tilde(ctx, 0.1) > 0
    with pytest.raises(ValueError):
        expsums.l2_e_tilde(ctx, 0.6)
    assert expsums.rh_l2_shape(100, 2, 0.1) == pytest.approx(
        10 * 0.1 * math.log(100) ** 2)
    assert expsums.tolev_shape(100, 2, 0.1) == pytest.approx(
        (0.1 * 10 + 1.0) * math.log(100) ** 3)


def test_parseval_small():
    ctx = ExpSumContext.build(500, 3)
    _, _, rel = expsums.parseval_check(ctx)
    assert rel < 1e-12


def test_decomposition_matches_expected_coefficients():
    for r in range(2, 8):
        assert expsums.decomposition_coefficients(r) == {
            s: 1 - s for s in range(2, r + 1)}
    with pytest.raises(ValueError):
        expsums.decomposition_coefficients(1)


@settings(max_examples=50)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_decomposition_residual(r, seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=r) + 1j * rng.normal(size=r)
    y = rng.normal(size=r) + 1j * rng.normal(size=r)
    scale = max(1.0, float(np.prod(np.abs(x) + np.abs(y))))
    assert expsums.decomposition_residual(x, y) <= 1e-12 * scale


def test_reconstruct_small_cases():
    ns = [12, 17, 20, 27, 40]
    got = expsums.reconstruct_r_via_integral(30, ns, (2, 2, 2))
    for n, g in zip(ns, got):
        assert g == pytest.approx(rep_single_bruteforce(n, (2, 2, 2)), abs=1e-9)
    single = expsums.reconstruct_r_via_integral(30, 12, (2, 2, 2))
    assert isinstance(single, float)


def test_reconstruct_guards():
    with pytest.raises(ValueError):
        expsums.reconstruct_r_via_integral(10, [10**4], (2, 2))
    with pytest.raises(SamplingError):
        expsums.reconstruct_r_via_integral(10, [5], (2, 2), m=10)


def test_restricted_range_integral_runs():
    val = expsums.restricted_range_integral(50, 20, 2, (2, 2, 2), panels=400)
    assert np.isfinite(val)
    assert expsums.restricted_range_integral(50, 20, 20, (2, 2, 2)) == 0j


def test_context_requires_table():
    with pytest.raises(ValueError):
        ExpSumContext(10**4, 2, sieve_lambda(10))
