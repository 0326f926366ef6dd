"""Compiled and pure-Python kernels against each other and exact oracles."""
import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ppra import kernels
from ppra.arith import psi_prefix, sieve_lambda

BACKENDS = kernels.available_backends()


@pytest.fixture(params=sorted(BACKENDS))
def impl(request):
    return BACKENDS[request.param]


def test_backend_selected():
    assert kernels.BACKEND in BACKENDS


@pytest.mark.skipif("cython" not in BACKENDS, reason="extension not built")
def test_extension_is_default_when_built():
    import os
    if not os.environ.get("PPRA_PURE_PYTHON"):
        assert kernels.BACKEND == "cython"


@given(st.integers(min_value=0, max_value=2**63 - 2),
       st.integers(min_value=1, max_value=8))
def test_iroot(t, k):
    for impl in BACKENDS.values():
        r = impl.iroot(t, k)
        assert r ** k <= t < (r + 1) ** k


def test_sieve_backends_agree():
    vals = [impl.sieve_lambda(50000) for impl in BACKENDS.values()]
    for v in vals[1:]:
        assert np.array_equal(v, vals[0])


def _exact_phase_sum(alpha, n_vals, weights, k):
    a = Fraction(alpha)
    total = 0j
    for n, w in zip(n_vals, weights):
        frac = (Fraction(n) ** k * a) % 1
        total += w * cmath.exp(2j * math.pi * float(frac))
    return total


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=-0.5, max_value=0.5))
def test_s_tilde_points_exact_phase(alpha):
    # frequencies up to about 1e12, where naive float phases lose ~4 digits
    n_vals = np.array([2, 3, 97, 10007, 999983], dtype=np.int64)
    weights = np.array([0.7, 1.1, 0.3, 0.9, 0.5])
    want = _exact_phase_sum(alpha, n_vals.tolist(), weights.tolist(), 2)
    for impl in BACKENDS.values():
        got = impl.s_tilde_points(np.array([alpha]), n_vals, weights, 2)[0]
        assert abs(got - want) <= 1e-9


def test_s_tilde_backends_agree():
    table = sieve_lambda(3000)
    m, logs = table.prime_powers()
    alphas = np.linspace(-0.5, 0.5, 257)
    outs = [impl.s_tilde_points(alphas, m, logs, 3) for impl in BACKENDS.values()]
    for o in outs[1:]:
        np.testing.assert_allclose(o, outs[0], rtol=0, atol=1e-9)


def test_s_tilde_grid_matches_points(impl):
    table = sieve_lambda(200)
    m, logs = table.prime_powers()
    size = 101
    grid = impl.s_tilde_grid(size, m, logs, 2)
    pts = impl.s_tilde_points(np.arange(size) / size, m, logs, 2)
    np.testing.assert_allclose(grid, pts, rtol=0, atol=1e-9)


def test_bruteforce_backends_agree():
    table = sieve_lambda(100)
    pp_m, pp_log = table.prime_powers()
    exps = np.array([2, 2, 3], dtype=np.int64)
    for n in range(0, 3000, 7):
        vals = [impl.bruteforce_rep(n, exps, pp_m, pp_log, table.values)
                for impl in BACKENDS.values()]
        assert len(set(vals)) == 1


def test_window_partials_bitwise_equal():
    psi = psi_prefix(sieve_lambda(400))
    pp_m, pp_log = psi.table.prime_powers()
    exps = np.array([2, 2, 2], dtype=np.int64)
    outs = [impl.window_partials(10**5, 5000, exps, pp_m, pp_log,
                                 psi.table.values, psi.cumulative, 0, pp_m.size)
            for impl in BACKENDS.values()]
    for raw, weighted in outs[1:]:
        assert np.array_equal(raw, outs[0][0])
        assert np.array_equal(weighted, outs[0][1])
