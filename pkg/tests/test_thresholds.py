import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from conftest import C_VALUES, TABLE1
from kstar import thresholds as th
from kstar.polyexact import RationalPolynomial

valid_dk = st.integers(3, 40).flatmap(lambda d: st.tuples(st.just(d), st.integers(d // 2 + 1, d - 1)))


def test_f_for_3_2():
    assert th.build_f((3, 2)) == RationalPolynomial([0, Fraction(2, 3), Fraction(1, 3)])


def test_g_for_3_2():
    assert th.build_g((3, 2)) == RationalPolynomial([Fraction(1, 3), Fraction(2, 3)])


@settings(max_examples=60, deadline=None, derandomize=True)
@given(valid_dk)
def test_pgf_identities(dk):
    d, k = dk
    f, g = th.build_f(dk), th.build_g(dk)
    assert f(1) == 1 and g(1) == 1
    assert f.derivative()(1) == Fraction(k * k, d)
    assert g.derivative()(1) == Fraction(k * (d - k), d)
    assert all(c > 0 for c in f.coeffs if c) and all(c > 0 for c in g.coeffs)
    assert min(i for i, c in enumerate(f.coeffs) if c) == 2 * k - d
    # g(t) = t^k f(1/t), compared coefficientwise
    assert [f.coeffs[k - j] if k - j < len(f.coeffs) else 0 for j in range(len(g.coeffs))] == list(g.coeffs)


@settings(max_examples=60, deadline=None, derandomize=True)
@given(valid_dk)
def test_q_vanishes_at_one_and_branches_strict(dk):
    d, k = dk
    assert th.build_Q(dk)(1) == 0
    f, y = th.build_f(dk), th.build_y(dk)
    assert y(1) - f(1) == Fraction(2 * k - d, d)
    assert f(1) - Fraction(2 * (d - k), d) * y(1) == Fraction((d - 2 * k) ** 2, d * d)


def test_f_requires_k_above_half():
    with pytest.raises(ValueError):
        th.build_f((6, 3))


@pytest.mark.parametrize("dk", [(20, 12), (7, 4), (3, 2)])
def test_eta_at_zero_and_one(dk):
    d, k = dk
    with mpmath.workdps(60):
        assert abs(th.eta(dk, 1) - mpmath.mpf(2 * k - d) / d) < mpmath.mpf(10) ** -50
        assert abs(th.eta(dk, 0) - mpmath.mpf(2 * k - d) / (2 * (d - k))) < mpmath.mpf(10) ** -50


def test_eta_decreasing_20_12():
    e2 = th.eta((20, 12), 2)
    assert e2 < mpmath.mpf("0.2") and e2 > 0
    xs = [mpmath.mpf(i) / 4 for i in range(0, 40)]
    vals = [th.eta((20, 12), x) for x in xs]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_eta_rejects_low_k():
    with pytest.raises(ValueError):
        th.eta((6, 3), 1)


@settings(max_examples=30, deadline=None, derandomize=True)
@given(valid_dk)
def test_fhat_zero_at_one(dk):
    assert abs(th.fhat(dk, 1)) < mpmath.mpf(10) ** -45


def test_fhat_rejects_nonpositive():
    with pytest.raises(ValueError):
        th.fhat((20, 12), 0)


@pytest.mark.parametrize("dk", [(20, 11), (20, 12)])
def test_plot_fhat_crosses_only_at_one(dk):
    series = th.plot_fhat(dk)
    changes = th.sign_changes(series)
    assert len(changes) == 1
    lo, hi = changes[0]
    assert lo <= 1 <= hi


def test_20_13_fails_p2():
    assert not th.check_P2((20, 13))
    with pytest.raises(ValueError, match="P1 undefined without P2"):
        th.check_P1((20, 13))


def test_fhat_csv_header_and_precision():
    text = th.fhat_csv(th.plot_fhat((20, 12), th.default_grid(th.Params(20, 12), 5)))
    lines = text.splitlines()
    assert lines[0] == "x,fhat"
    assert len(lines) == 7  # 5 points plus x=1


@pytest.mark.parametrize("dk, expected", [((20, 12), True), ((20, 13), False)])
def test_check_p2(dk, expected):
    assert th.check_P2(dk) is expected


@pytest.mark.parametrize("d", range(3, 60))
def test_p2_at_smallest_k(d):
    assert th.check_P2((d, (d + 2) // 2))


@pytest.mark.parametrize("dk", [(20, 11), (20, 12), (3, 2)])
def test_check_p1_true(dk):
    assert th.check_P1(dk)


@pytest.mark.parametrize("d, k", [(5, 4), (14, 9), (12, 8), (10, 7)])
def test_p1_or_p2_fails_where_ksscm_below_kplus(d, k):
    assert not (th.check_P2((d, k)) and th.check_P1((d, k)))


@pytest.mark.parametrize("d, expected", [(5, 4), (14, 9), (20, 12)])
def test_compute_kplus(d, expected):
    assert th.compute_kplus(d) == expected


@pytest.mark.parametrize("d, expected", [(16, 10), (20, 12), (3, 2)])
def test_compute_ksscm(d, expected):
    assert th.compute_ksscm(d) == expected


def test_table1_rows():
    assert {d: (s, p) for d, s, p in th.table1(20)} == TABLE1


@pytest.mark.parametrize("d", range(3, 41))
def test_kplus_at_least_smallest_k(d):
    assert th.compute_kplus(d) >= (d + 2) // 2


@pytest.mark.parametrize("d", range(3, 41))
def test_kplus_matches_hd_sign(d):
    from kstar.moments import hd_alpha

    for k in range(d // 2 + 1, d):
        alpha = Fraction(2 * k - d, 2 * k)
        assert th.kplus_holds(d, k) == (hd_alpha(d, alpha) > 0)


@pytest.mark.parametrize("dk, text", sorted(C_VALUES.items()))
def test_c_values(dk, text):
    val, gt = th.c_value(dk)
    assert mpmath.nstr(val, 4) == text or f"{float(val):.3f}" == text
    assert gt is (val > 1)


def test_c_comparator_5_4_and_4_3():
    assert th.c_value((5, 4))[1] is False
    assert th.c_value((4, 3))[1] is True


def test_a_prime_closed_9_6():
    assert th.check_A((9, 6), 1).A1_closed == Fraction(1, 6)


@pytest.mark.parametrize("dk", [(9, 6), (20, 12), (7, 4), (4, 3)])
def test_a_prime_finite_difference(dk):
    vals = th.check_A(dk, 1)
    closed = mpmath.mpf(vals.A1_closed.numerator) / vals.A1_closed.denominator
    assert abs(vals.A1_numeric - closed) <= 1e-8 * abs(closed)


@pytest.mark.parametrize("dk", [(9, 6), (20, 12), (7, 4), (16, 10)])
def test_a_convex_on_1_3(dk):
    A = th.build_A(dk)
    ts = [1 + Fraction(i, 20) for i in range(41)]
    vals = [A(t) for t in ts]
    assert all(vals[i - 1] - 2 * vals[i] + vals[i + 1] >= 0 for i in range(1, len(vals) - 1))


@pytest.mark.parametrize("dk", [(9, 6), (20, 12), (7, 4)])
def test_a_at_one(dk):
    # direct evaluation of A(1) = -(2k-d)^2 / (2d(d-k))
    d, k = dk
    assert th.build_A(dk)(1) == Fraction(-(2 * k - d) ** 2, 2 * d * (d - k))


def test_threshold_report_fields():
    rep = th.threshold_report(20)
    assert (rep.ksscm, rep.kplus) == (12, 12)
    assert rep.p2_holds[12] and rep.p1_holds[12]
    assert rep.ksscm <= rep.kplus and 10 < rep.ksscm < 20


@pytest.mark.slow
def test_scan_to_100():
    for d, s, p in th.scan(100):
        assert s in (p - 1, p), d
