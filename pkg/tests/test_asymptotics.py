import math

import pytest
from hypothesis import given, strategies as st

from ppra.asymptotics import (EmptyRangeError, TheoremConfig,
                              admissible_h_range, ladder_report, main_coefficient,
                              main_term, phi_error_model,
                              unconditional_error_model, unconditional_exponents,
                              weight_removal_check, weighted_main_term)
from ppra.special import KTuple, big_a


def test_main_coefficient_three_squares():
    assert main_coefficient((2, 2, 2)) == pytest.approx(math.pi / 4, rel=1e-14)


def test_main_term_closed_form():
    assert main_term(10**6, 100, (2, 2, 2)) == pytest.approx(
        math.pi / 4 * 100 * 1000, rel=1e-13)
    assert weighted_main_term(10**6, 100, (2, 2, 2)) == pytest.approx(
        main_term(10**6, 100, (2, 2, 2)) / math.e)


@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_main_term_linear_in_h(h1, h2):
    k = KTuple((2, 3, 5))
    total = main_term(10**7, h1 + h2, k)
    parts = main_term(10**7, h1, k) + main_term(10**7, h2, k)
    assert total == pytest.approx(parts, rel=1e-12)


def test_config_validation():
    with pytest.raises(ValueError):
        TheoremConfig(KTuple((2, 2)))
    with pytest.raises(ValueError):
        TheoremConfig(KTuple((2, 2, 2)), epsilon=0.25)
    with pytest.raises(ValueError):
        TheoremConfig(KTuple((2, 2, 2)), c1=0)
    cfg = TheoremConfig((3, 2, 2), epsilon=0.1)
    assert cfg.tuple.exponents == (2, 2, 3)
    assert cfg.b_exponent == pytest.approx(0.2)


def test_admissible_range_unconditional():
    cfg = TheoremConfig(KTuple((2, 2, 2)), epsilon=0.01)
    lo, hi = admissible_h_range(10**6, cfg)
    assert lo == pytest.approx(1e6 ** (1 - 5 / 12 + 0.01))
    assert hi == pytest.approx(1e6 ** 0.99)
    assert unconditional_exponents(cfg) == pytest.approx((1 - 5 / 12 + 0.01, 0.99))


def test_admissible_range_empty_and_rh():
    # 1 - 5/12 + eps >= 1 - eps once eps >= 5/24; eps < 1/4 is still allowed
    with pytest.raises(EmptyRangeError):
        admissible_h_range(10**4, TheoremConfig(KTuple((2, 2, 2)), epsilon=0.22))
    rh = TheoremConfig(KTuple((2, 2, 2)), epsilon=0.05, rh_mode=True)
    with pytest.raises(EmptyRangeError):
        # (log N)^6 swamps everything at small N
        admissible_h_range(10**4, rh)
    lo, hi = admissible_h_range(10**40, rh)
    assert lo == pytest.approx(10 * 10**20 * math.log(10**40) ** 6)
    with pytest.raises(ValueError):
        admissible_h_range(10, rh)


def test_error_models():
    k = (2, 2, 2)
    n, h = 10**6, 10**4
    assert phi_error_model(n, h, k) == pytest.approx(
        h * h * n ** -0.5 + math.sqrt(h) * n ** 0.75 * math.log(n) ** 3)
    assert unconditional_error_model(n, h, k, -1 / 3) == pytest.approx(
        h * n ** 0.5 * big_a(n, -1 / 3))


def test_ladder_flags_out_of_range_rows():
    cfg = TheoremConfig(KTuple((2, 2, 2)), epsilon=0.05)
    rows = ladder_report(cfg, [10**4, 10**5], 0.62)
    assert [r.in_range for r in rows] == [False, False]
    assert all("outside" in r.note for r in rows)
    assert all(r.raw_sum > 0 for r in rows)
    ok = ladder_report(TheoremConfig(KTuple((2, 2, 2)), epsilon=0.01),
                       [10**5], 0.62)
    assert ok[0].in_range and ok[0].note == ""


def test_ladder_workers_identical():
    cfg = TheoremConfig(KTuple((2, 2, 3)), epsilon=0.01)
    ns = [10**4, 3 * 10**4, 10**5]
    assert ladder_report(cfg, ns, 0.8) == ladder_report(cfg, ns, 0.8, workers=3)


def test_weight_removal_small():
    gap, budget, ok = weight_removal_check(10**4, 100, (2, 2, 2))
    assert ok and gap <= budget
