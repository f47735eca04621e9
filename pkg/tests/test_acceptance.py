"""The fifteen acceptance criteria, at their stated tolerances.

Run under pytest (one PASS/FAIL line per criterion in the terminal summary)
or directly: ``python tests/test_acceptance.py [N ...]``.
"""

from __future__ import annotations

import functools
import io
import math
import sys
import time
from contextlib import redirect_stdout
from fractions import Fraction
from pathlib import Path

import mpmath
import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))
from conftest import C_VALUES, TABLE1  # noqa: E402

from kstar import decompose as dc  # noqa: E402
from kstar import experiments as ex  # noqa: E402
from kstar import laplace as lp  # noqa: E402
from kstar import moments as mo  # noqa: E402
from kstar import thresholds as th  # noqa: E402
from kstar.cli import main as cli_main  # noqa: E402
from kstar.pairing import (  # noqa: E402
    complete_graph,
    m_pairings,
    mix_seed,
    petersen_graph,
    sample_simple_graph,
)


@functools.lru_cache(maxsize=None)
def _enumerated_4_3_n3():
    return mo.enumerate_moments(3, 4, 3)


def criterion_1():
    """Table 1 via `table1 --dmax 20`, under 5 minutes."""
    t0 = time.perf_counter()
    buf = io.StringIO()
    with redirect_stdout(buf):
        assert cli_main(["table1", "--dmax", "20", "--format", "csv"]) == 0
    elapsed = time.perf_counter() - t0
    rows = [ln.split(",") for ln in buf.getvalue().splitlines()[1:]]
    got = {int(d): (int(s), int(p)) for d, s, p in rows}
    assert len(rows) == 18
    assert got == TABLE1
    assert elapsed < 300


def criterion_2():
    """k_SSCM(d) in {k_+(d)-1, k_+(d)} for d = 3..100, under 2 hours."""
    t0 = time.perf_counter()
    rows = th.scan(100)
    assert [d for d, _, _ in rows] == list(range(3, 101))
    bad = [(d, s, p) for d, s, p in rows if s not in (p - 1, p)]
    assert not bad, bad
    assert time.perf_counter() - t0 < 7200


def criterion_3():
    """The nine published c(d,k) values at 3 d.p.; exact comparator agrees."""
    for dk, text in C_VALUES.items():
        val, _ = th.c_value(dk)
        assert f"{float(val):.3f}" == text, (dk, float(val))
    assert th.c_value((5, 4))[1] is False
    assert th.c_value((4, 3))[1] is True


def criterion_4():
    """f-hat for (20,11),(20,12): one sign change at x=1, one surviving root; (20,13) fails P2."""
    for dk in [(20, 11), (20, 12)]:
        detail = th.check_P1_detail(dk)
        assert detail.holds and len(detail.surviving) == 1 and 1 in detail.surviving[0]
        changes = th.sign_changes(th.plot_fhat(dk))
        assert len(changes) == 1
        lo, hi = changes[0]
        assert lo <= 1 <= hi
    assert not th.check_P2((20, 13))


def criterion_5():
    """exact_EY(3,4,3) = 256/77 against all 10395 pairings, under a minute."""
    t0 = time.perf_counter()
    ey, _ = _enumerated_4_3_n3()
    assert m_pairings(6) == 10395
    assert mo.exact_EY(3, 4, 3) == ey == Fraction(256, 77)
    assert time.perf_counter() - t0 < 60


def criterion_6():
    """exact_EY2(3,4,3) equals the enumerated sum of Y(P)^2 / M(12)."""
    t0 = time.perf_counter()
    _, ey2 = _enumerated_4_3_n3()
    assert mo.exact_EY2(3, 4, 3) == ey2
    assert time.perf_counter() - t0 < 300


def criterion_7():
    """Exact identities at b* for 5 <= d <= 20, d/2 < k < d; phi(b*) closed form within 1e-12."""
    for d in range(5, 21):
        for k in range(d // 2 + 1, d):
            b = lp.bstar(d, k).b
            assert sum(b) == Fraction(d, 2 * k) ** 2
            assert sum((k - i) * x for i, x in enumerate(b)) == Fraction(d, 4)
            assert sum((k - i) ** 2 * x for i, x in enumerate(b)) == Fraction(d, 4) + Fraction(
                d * (k - 1) ** 2, 4 * (d - 1)
            )
            assert sum(lp.xcoefs(d, k)) == math.comb(d, k) ** 2
            direct = lp.phi(d, k, b, high_precision=True)
            assert abs(direct - lp.phi_bstar_closed(d, k)) < 1e-12


def criterion_8():
    """det(-H*) closed form vs rank-2 formula and finite differences (1e-6 rel); Cholesky succeeds."""
    for d, k in [(4, 3), (7, 4), (16, 10), (20, 12)]:
        closed = lp.det_negH_closed(d, k)
        s = lp.rank_two_structure(d, k)
        assert abs(lp.det_rank_two(s.diag, s.v, s.w) / closed - 1) < 1e-6
        assert abs(lp.hessian_fd_det(d, k) / closed - 1) < 1e-6
        assert lp.negH_is_positive_definite(d, k)


def criterion_9():
    """grad_phi vs central differences at 20 interior points of (7,4); |grad(b*)| < 1e-10."""
    d, k = 7, 4
    rng = np.random.default_rng(20240907)
    lo, hi = (d - k) / k, d / (2 * k)
    h = 1e-6
    for _ in range(20):
        b = rng.dirichlet(np.ones(d - k + 1)) * rng.uniform(lo + 0.02 * (hi - lo), hi - 0.02 * (hi - lo))
        g = lp.grad_phi(d, k, b)
        fd = np.array([(lp.phi(d, k, b + h * e) - lp.phi(d, k, b - h * e)) / (2 * h) for e in np.eye(len(b))])
        assert np.max(np.abs(g - fd)) < 1e-6
    assert np.linalg.norm(lp.grad_phi(d, k, lp.bstar(d, k).as_array())) < 1e-10


def criterion_10():
    """maximize_phi with 200 starts lands on b* for (7,4),(9,6),(16,10),(20,12)."""
    for d, k in [(7, 4), (9, 6), (16, 10), (20, 12)]:
        res = lp.maximize_phi(d, k, lp.MaximizeOptions(starts=200, seed=0))
        assert len(res.runs) == 200
        assert res.matches_bstar, (d, k, res.distance, res.value - res.bstar_value)


def _series_sum(d, k):
    # sum lambda_j delta_j^2 straight from the cycle parameters, with a tail bound
    r = Fraction((d + 1 - 2 * k) ** 2, d - 1)
    acc = mpmath.mpf(0)
    j = 1
    while True:
        cp = mo.cycle_params(d, k, j)
        term = cp.lam * cp.delta**2
        acc += mpmath.mpf(term.numerator) / term.denominator
        if term == 0 or term / (1 - r) < Fraction(1, 10**25):
            return acc
        j += 1


def criterion_11():
    """exp(sum lambda_j delta_j^2) = variance_ratio_limit within 1e-10 for 5 <= d <= 30 under P2."""
    with mpmath.workdps(40):
        for d in range(5, 31):
            for k in range(d // 2 + 1, d):
                if not th.check_P2((d, k)):
                    continue
                s = _series_sum(d, k)
                assert abs(mpmath.exp(s) - mo.variance_ratio_limit(d, k)) < 1e-10, (d, k)
                assert abs(mpmath.exp(mo.sum_lambda_delta_sq(d, k)) - mo.variance_ratio_limit(d, k)) < 1e-10
            if d % 2:
                k = (d + 1) // 2
                assert mo.variance_ratio_limit(d, k) == 1 and mo.sum_lambda_delta_sq(d, k) == 0


def criterion_12():
    """d=3, n=200, 10^4 pairings: X_1..X_3 means and Pr(simple) within 3 standard errors."""
    res = ex.run_cycle_poisson(3, 200, 10_000, 3, seed=0)
    for row, lam in zip(res.rows, [1, 1, Fraction(4, 3)]):
        assert row.lam == float(lam)
        assert abs(row.mean - row.lam) < 3 * row.se, row
    assert abs(res.simple_freq - math.exp(-2)) < 3 * res.simple_se


def criterion_13():
    """Solver soundness (500 instances), brute-force agreement (100), refutations, Eulerian case."""
    pairs = {(3, 2): [8, 12, 16, 20], (4, 2): [8, 10, 12, 16], (4, 3): [6, 12, 18, 24],
             (6, 3): [10, 12, 14, 16], (6, 4): [12, 16, 20, 24]}
    checked = 0
    for (d, k), ns in pairs.items():
        for i in range(100):
            n = ns[i % len(ns)]
            g, _ = sample_simple_graph(n, d, mix_seed(13, d, k, i))
            r = dc.solve(g, k, dc.SolveOptions(mode="auto", time_limit=60))
            assert r.status in ("found", "proven-none", "unknown")
            if r.found:
                assert dc.verify(g, r.decomposition, k)
                indeg = dc.stars_to_orientation(g, r.decomposition).indeg
                assert all(x % k == 0 for x in indeg)
            checked += 1
    assert checked == 500
    agree = 0
    for t in range(100):
        rng = np.random.default_rng(mix_seed(131, t))
        d = int(rng.integers(2, 5))
        n = int(rng.choice([x for x in range(d + 1, 9) if (x * d) % 2 == 0]))
        k = int(rng.integers(1, 5))
        g, _ = sample_simple_graph(n, d, mix_seed(132, t))
        r = dc.solve(g, k, dc.SolveOptions(mode="exact"))
        assert r.status != "unknown"
        assert r.found == dc.brute_force_decomposable(g, k), (n, d, k)
        agree += 1
    assert agree == 100
    assert dc.solve(complete_graph(4), 3, dc.SolveOptions(mode="exact")).status == "proven-none"
    assert dc.solve(petersen_graph(), 3, dc.SolveOptions(mode="exact")).status == "proven-none"
    connected = 0
    for t in range(60):
        g, _ = sample_simple_graph(10 + 2 * (t % 10), 4, mix_seed(134, t))
        if g.is_connected():
            r = dc.solve(g, 2)
            assert r.found and dc.verify(g, r.decomposition, 2)
            connected += 1
    assert connected >= 30


def criterion_14():
    """(4,3): freq at n=30 >= freq at n=6 minus two pooled SEs; (5,4), n=24: found implies 3n/8 leaves."""
    res = ex.run_existence(ex.TrialConfig(d=4, k=3, n_list=[6, 30], trials=100, seed=0))
    s6, s30 = res.summary["6"], res.summary["30"]
    assert s6["unknown"] == 0 and s30["unknown"] == 0
    pooled = (s6["found"] + s30["found"]) / 200
    se = math.sqrt(pooled * (1 - pooled) * (1 / 100 + 1 / 100))
    assert s30["frequency"] >= s6["frequency"] - 2 * se
    leaf = ex.run_leaf_condition(5, 4, 24, 100, seed=0)
    assert all(r.need == 9 for r in leaf.records)
    assert leaf.implication_holds
    for r in leaf.records:
        if r.found:
            assert r.alpha >= 9


def criterion_15():
    """Same seed gives identical CSV bytes for every experiment."""
    cfg = dict(d=4, k=3, n_list=[6, 12, 18], trials=10, seed=77)
    a = ex.run_existence(ex.TrialConfig(**cfg)).csv().encode()
    b = ex.run_existence(ex.TrialConfig(**cfg)).csv().encode()
    assert a == b
    c1 = ex.run_cycle_poisson(3, 60, 200, 4, seed=77).csv().encode()
    c2 = ex.run_cycle_poisson(3, 60, 200, 4, seed=77).csv().encode()
    assert c1 == c2
    l1 = ex.run_leaf_condition(5, 4, 16, 10, seed=77).csv().encode()
    l2 = ex.run_leaf_condition(5, 4, 16, 10, seed=77).csv().encode()
    assert l1 == l2
    assert ex.run_existence(ex.TrialConfig(**{**cfg, "seed": 78})).csv().encode() != a


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 16)}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_acceptance(number, record_property):
    record_property("criterion", number)
    CRITERIA[number]()


if __name__ == "__main__":
    wanted = [int(a) for a in sys.argv[1:]] or sorted(CRITERIA)
    failures = 0
    for i in wanted:
        t0 = time.perf_counter()
        try:
            CRITERIA[i]()
            status = "PASS"
        except Exception as exc:  # report and keep going
            status = f"FAIL ({type(exc).__name__}: {exc})"
            failures += 1
        print(f"criterion {i:2d}: {status}  [{time.perf_counter() - t0:.1f}s]  {CRITERIA[i].__doc__}")
    sys.exit(1 if failures else 0)
