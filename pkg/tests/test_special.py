import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from ppra.special import (ComplexParam, KTuple, big_a, density, g_of_k,
                          gamma_k, gamma_real, z_power_neg_mu, z_value)


def _gamma_by_quadrature(x):
    val, _ = integrate.quad(lambda t: t ** (x - 1) * math.exp(-t), 0, np.inf,
                            epsabs=0, epsrel=1e-13, limit=200)
    return val


@pytest.mark.parametrize("x", [4.7, 4.0 / 3.0, 1.5, 2.5, 7.25])
def test_gamma_against_quadrature(x):
    assert gamma_real(x) == pytest.approx(_gamma_by_quadrature(x), rel=1e-10)


def test_gamma_four_thirds():
    assert gamma_k(3) == pytest.approx(0.8929795115692492, rel=1e-13)
    assert gamma_k(2) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-14)


@given(st.floats(min_value=1e-3, max_value=45.0))
def test_gamma_matches_math_gamma(x):
    assert gamma_real(x) == pytest.approx(math.gamma(x), rel=1e-12)


@given(st.floats(min_value=0.05, max_value=40.0))
def test_gamma_recurrence(x):
    assert gamma_real(x + 1) == pytest.approx(x * gamma_real(x), rel=1e-12)


@pytest.mark.parametrize("x", [0.0, -1.0, 50.5, float("nan")])
def test_gamma_domain(x):
    with pytest.raises(ValueError):
        gamma_real(x)


def test_ktuple_sorting_and_validation():
    k = KTuple.parse("3, 2,2")
    assert k.exponents == (2, 2, 3)
    assert k.r == 3 and k.k_max == 3
    assert str(k) == "2,2,3"
    assert k.min_representable == 16
    with pytest.raises(ValueError):
        KTuple((1, 2))
    with pytest.raises(ValueError):
        KTuple.parse(" , ")


def test_density_and_g_multiplicative():
    assert density(KTuple((2, 2, 2))) == pytest.approx(1.5)
    assert g_of_k(()) == 1.0
    a, b = (2, 3), (4, 5)
    assert g_of_k(a + b) == pytest.approx(g_of_k(a) * g_of_k(b), rel=1e-15)
    # Gamma(3/2)^3 / Gamma(3/2) = pi/4
    assert g_of_k((2, 2, 2)) / gamma_real(1.5) == pytest.approx(math.pi / 4)


def test_complex_param():
    z = ComplexParam(100, 0.25)
    assert z.value == complex(0.01, -math.pi / 2)
    assert z_value(100, 0.25) == z.value
    with pytest.raises(ValueError):
        ComplexParam(100, 0.6)
    with pytest.raises(ValueError):
        ComplexParam(0, 0.1)


@given(st.floats(min_value=-0.5, max_value=0.5),
       st.floats(min_value=0.1, max_value=3.0))
def test_z_power_matches_principal_branch(alpha, mu):
    z = complex(z_value(1000, alpha))
    assert z_power_neg_mu(z, mu) == pytest.approx(z ** (-mu), rel=1e-11)


def test_z_power_needs_right_half_plane():
    with pytest.raises(ValueError):
        z_power_neg_mu(-1 + 0j, 0.5)
    with pytest.raises(ValueError):
        z_power_neg_mu(1 + 0j, 0.0)


def test_big_a():
    n = 10**6
    expected = math.exp(0.5 * (math.log(n) / math.log(math.log(n))) ** (1 / 3))
    assert big_a(n, 0.5) == pytest.approx(expected)
    assert big_a(n, -0.5) * big_a(n, 0.5) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        big_a(2, 1.0)
