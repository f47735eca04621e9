import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from kstar import moments as mo
from kstar.pairing import m_pairings


def test_cycle_params_examples():
    assert mo.cycle_params(3, 2, 1).lam == 1
    assert mo.cycle_params(4, 3, 1).delta == Fraction(-1, 3)
    for d in (3, 5, 7, 9):
        k = (d + 1) // 2
        assert all(mo.cycle_params(d, k, j).delta == 0 for j in range(1, 8))


@settings(max_examples=100, deadline=None, derandomize=True)
@given(d=st.integers(3, 30), j=st.integers(1, 12), data=st.data())
def test_limit_factor_positive(d, j, data):
    k = data.draw(st.integers(1, d - 1))
    cp = mo.cycle_params(d, k, j)
    assert cp.delta > -1 and cp.limit_factor > 0


def test_sum_lambda_delta_sq_4_3():
    closed, partial = mo.sum_lambda_delta_sq(4, 3, terms=200)
    with mpmath.workdps(60):
        assert abs(closed - mpmath.log(mpmath.mpf(3) / 2) / 2) < mpmath.mpf(10) ** -50
    assert abs(partial[-1] - closed) < 1e-10
    assert abs(closed - mpmath.mpf("0.2027")) < 1e-4


def test_sum_lambda_delta_sq_zero_when_delta_zero():
    assert mo.sum_lambda_delta_sq(9, 5) == 0


def test_sum_lambda_delta_sq_20_12():
    closed, partial = mo.sum_lambda_delta_sq(20, 12, terms=400)
    with mpmath.workdps(60):
        assert abs(closed - mpmath.log(mpmath.mpf(19) / 10) / 2) < mpmath.mpf(10) ** -50
    assert abs(partial[-1] - closed) < 1e-10


def test_partial_sums_monotone():
    closed, partial = mo.sum_lambda_delta_sq(16, 10, terms=100)
    assert all(a <= b for a, b in zip(partial, partial[1:]))
    assert partial[-1] <= closed


def test_series_condition_error():
    with pytest.raises(ValueError, match="series condition fails"):
        mo.sum_lambda_delta_sq(20, 13)


def test_variance_ratio_examples():
    assert abs(mo.variance_ratio_limit(4, 3) - mpmath.sqrt(1.5)) < 1e-15
    assert mo.variance_ratio_limit(7, 4) == 1
    with pytest.raises(ValueError):
        mo.variance_ratio_limit(20, 13)


@pytest.mark.parametrize("dk", [(4, 3), (7, 4), (16, 10), (20, 12), (30, 17)])
def test_variance_ratio_is_exp_sum(dk):
    with mpmath.workdps(60):
        assert abs(mpmath.exp(mo.sum_lambda_delta_sq(*dk)) - mo.variance_ratio_limit(*dk)) < 1e-10


def test_exact_ey_examples():
    assert mo.exact_EY(3, 4, 3) == Fraction(256, 77)
    assert mo.exact_EY(6, 2, 2) == Fraction(20 * 720, 10395)


def test_exact_ey_divisibility():
    with pytest.raises(ValueError):
        mo.exact_EY(5, 4, 3)


def test_exact_ey_matches_enumeration_6_2_2():
    ey, _ = mo.enumerate_moments(6, 2, 2)
    assert ey == mo.exact_EY(6, 2, 2)


def test_asympt_ey_ratio_n60():
    exact = mo.exact_EY(60, 4, 3)
    with mpmath.workdps(60):
        ratio = (mpmath.mpf(exact.numerator) / exact.denominator) / mo.asympt_EY(60, 4, 3)
    assert abs(ratio - 1) < 0.05


def test_asympt_base_below_one_for_5_4():
    # E Y shrinks along n
    a, b = mo.asympt_EY(8, 5, 4), mo.asympt_EY(80, 5, 4)
    assert b < a


def test_exact_ez_examples():
    assert mo.exact_EZ(6, 3, 0) == 1
    assert mo.exact_EZ(3, 2, 1) == mo.enumerate_EZ(3, 2, 1)
    assert mo.exact_EZ(4, 3, 2) == mo.enumerate_EZ(4, 3, 2)
    n, d = 3, 2
    assert mo.exact_EZ(n, d, 1) == Fraction(n * m_pairings((d * n - 2 * d) // 2) * math.perm(d * n - d, d),
                                            m_pairings(d * n // 2))


def test_exact_ez_range():
    with pytest.raises(ValueError):
        mo.exact_EZ(4, 3, 3)


def test_hd_alpha():
    assert mo.hd_alpha(5, 0) == 0
    with pytest.raises(ValueError):
        mo.hd_alpha(5, Fraction(1, 2))
    xs = [mpmath.mpf(i) / 100 for i in range(1, 50)]
    vals = [mo.hd_alpha(10, x) for x in xs]
    assert all(vals[i - 1] - 2 * vals[i] + vals[i + 1] <= 0 for i in range(1, len(vals) - 1))


@pytest.mark.parametrize("d", [3, 4, 5, 10, 20])
def test_hd_single_root(d):
    r = mo.hd_root(d)
    assert 0 < r < 0.5 and abs(mo.hd_alpha(d, r)) < 1e-30
    xs = [mpmath.mpf(i) / 1000 for i in range(1, 500)]
    signs = [mo.hd_alpha(d, x) > 0 for x in xs]
    assert sum(a != b for a, b in zip(signs, signs[1:])) == 1


def test_exact_ey2_3_4_3():
    assert mo.exact_EY2(3, 4, 3) == Fraction(5888, 385)


def test_exact_ey2_cap():
    with pytest.raises(ValueError):
        mo.exact_EY2(30, 4, 3, cap=10)


@pytest.mark.parametrize("n", [3, 6, 9, 12, 30])
def test_ey2_at_least_ey_squared(n):
    assert mo.exact_EY2(n, 4, 3) >= mo.exact_EY(n, 4, 3) ** 2


def test_ey2_ratio_trends_to_limit():
    target = math.sqrt(1.5)
    errs = []
    for n in (30, 60, 120, 240):
        r = mo.exact_EY2(n, 4, 3) / mo.exact_EY(n, 4, 3) ** 2
        errs.append(abs(float(r) - target))
    assert errs[-1] < errs[0] and errs[-1] < 0.05


def test_enumerate_pairings_count():
    for points in (2, 4, 6, 8, 10):
        ps = list(mo.enumerate_pairings(points))
        assert len(ps) == m_pairings(points // 2) == len(set(ps))


def test_moment_report():
    rep = mo.moment_report(4, 3, 3)
    assert rep.exact_EY == Fraction(256, 77) and rep.exact_EY2 == Fraction(5888, 385)
    assert rep.exact_EY2 >= rep.exact_EY ** 2
