"""Existence thresholds for k-star decompositions of random d-regular graphs.

The hypergeometric PGFs f and g are built exactly; the interior-uniqueness
condition is decided by Sturm root isolation on the polynomialised
stationarity equation, never by sampling f-hat.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .polyexact import (
    Ordering,
    PowerProduct,
    RationalInterval,
    RationalPolynomial,
    SturmChain,
    isolate_roots,
    power_product_compare,
    sign_on_interval,
)

WORKING_DPS = 60


@dataclass(frozen=True)
class Params:
    d: int
    k: int

    def __post_init__(self):
        if self.d < 3:
            raise ValueError(f"d must be >= 3, got {self.d}")
        if not 1 <= self.k < self.d:
            raise ValueError(f"need 1 <= k < d, got (d,k)=({self.d},{self.k})")

    @property
    def above_half(self) -> bool:
        return 2 * self.k > self.d

    def require_above_half(self):
        if not self.above_half:
            raise ValueError(f"requires 2k > d, got (d,k)=({self.d},{self.k})")


@dataclass
class ThresholdReport:
    d: int
    ksscm: int
    kplus: int
    p2_holds: dict[int, bool] = field(default_factory=dict)
    p1_holds: dict[int, bool] = field(default_factory=dict)
    c_value: dict[int, str] = field(default_factory=dict)
    c_gt_one: dict[int, bool] = field(default_factory=dict)


def _params(params) -> Params:
    return params if isinstance(params, Params) else Params(*params)


# --------------------------------------------------------------------------
# polynomials


def build_f(params) -> RationalPolynomial:
    """PGF of the hypergeometric distribution with parameters (d, k, k)."""
    p = _params(params)
    d, k = p.d, p.k
    if not d < 2 * k:
        raise ValueError(f"build_f needs d/2 < k < d, got (d,k)=({d},{k})")
    mu = math.comb(d, k)
    coeffs = [Fraction(0)] * (k + 1)
    for i in range(d - k + 1):
        coeffs[k - i] = Fraction(math.comb(k, i) * math.comb(d - k, i), mu)
    return RationalPolynomial(coeffs)


def build_g(params) -> RationalPolynomial:
    """Reversed PGF g(t) = t^k f(1/t), hypergeometric with parameters (d, k, d-k)."""
    p = _params(params)
    d, k = p.d, p.k
    if not d < 2 * k:
        raise ValueError(f"build_g needs d/2 < k < d, got (d,k)=({d},{k})")
    mu = math.comb(d, k)
    return RationalPolynomial(Fraction(math.comb(k, j) * math.comb(d - k, j), mu) for j in range(d - k + 1))


def build_y(params) -> RationalPolynomial:
    """y(x) = (x+1) f'(x) / k."""
    p = _params(params)
    f = build_f(p)
    return RationalPolynomial([1, 1]) * f.derivative() * Fraction(1, p.k)


def build_Q(params) -> RationalPolynomial:
    """(y - f)^2 - f + 2(d-k) y / d; its positive roots with y > f are the interior stationary points."""
    p = _params(params)
    f = build_f(p)
    y = build_y(p)
    return (y - f) ** 2 - f + y * Fraction(2 * (p.d - p.k), p.d)


# --------------------------------------------------------------------------
# (P2) and (P1)


def check_P2(params) -> bool:
    p = _params(params)
    d, k = p.d, p.k
    return (2 * k - d) ** 2 < 4 * k - d - 2


def p1_interval(params) -> RationalInterval:
    """Open x-interval on which x = 1 must be the unique interior solution."""
    p = _params(params)
    d, k = p.d, p.k
    gap = 4 * k - d - 2 - (2 * k - d) ** 2
    if gap <= 0:
        raise ValueError("P1 undefined without P2")
    lo = 1 / (1 + Fraction((2 * k - d) ** 2 * d, k * (d - k) * gap))
    hi = Fraction(5 * k - 2 * d, d - k)
    return RationalInterval(lo, hi)


@dataclass
class P1Detail:
    holds: bool
    interval: RationalInterval
    root_intervals: list[RationalInterval]
    surviving: list[RationalInterval]
    unit_root: RationalInterval | None


def check_P1_detail(params) -> P1Detail:
    p = _params(params)
    p.require_above_half()
    if not check_P2(p):
        raise ValueError("P1 undefined without P2")
    d, k = p.d, p.k
    iv = p1_interval(p)
    assert 1 in iv, "x=1 outside the P1 interval"
    f = build_f(p)
    y = build_y(p)
    Q = (y - f) ** 2 - f + y * Fraction(2 * (d - k), d)
    assert Q(1) == 0
    Q_red, _ = Q.strip_x_power()  # roots at 0 lie outside iv
    chain = SturmChain.of(Q_red)
    roots = isolate_roots(chain, iv)
    upper_branch = SturmChain.of(y - f)  # y > f
    lower_branch = SturmChain.of(f - y * Fraction(2 * (d - k), d))  # f > 2(d-k)y/d
    surviving: list[RationalInterval] = []
    unit = None
    for r in roots:
        if 1 in r:
            unit = r
            surviving.append(r)
            continue
        if _branch_ok(chain, r, upper_branch, lower_branch):
            surviving.append(r)
    assert unit is not None, "x=1 root not isolated"
    holds = len(surviving) == 1
    return P1Detail(holds, iv, roots, surviving, unit)


def _branch_ok(chain: SturmChain, r: RationalInterval, *constraints: SturmChain) -> bool:
    """Refine r until every constraint polynomial has a fixed sign on it; all must be positive."""
    cur = r
    while True:
        signs = [sign_on_interval(c, cur) for c in constraints]
        if all(s is not None for s in signs):
            return all(s > 0 for s in signs)
        m = cur.midpoint
        if chain.sign_at(m) == 0:
            return all(_sign_exact(c, m) > 0 for c in constraints)
        left = RationalInterval(cur.lo, m)
        cur = left if chain.count(left) == 1 else RationalInterval(m, cur.hi)


def _sign_exact(chain: SturmChain, x: Fraction) -> int:
    return chain.sign_at(x)


def check_P1(params) -> bool:
    return check_P1_detail(params).holds


# --------------------------------------------------------------------------
# thresholds


def kplus_holds(d: int, k: int) -> bool:
    """The independent-set expectation inequality, raised to the d-th power."""
    lhs = PowerProduct([(d, d * (d - 1))])
    rhs = PowerProduct([(2 * k - d, 2 * k - d), (2, d * d - 2 * k), (k, k * (d - 2)), (d - k, d * (d - k))])
    return power_product_compare(lhs, rhs) is Ordering.GREATER


def compute_kplus(d: int) -> int:
    if d < 3:
        raise ValueError("d must be >= 3")
    for k in range(d - 1, d // 2, -1):
        if 2 * k > d and kplus_holds(d, k):
            return k
    raise AssertionError(f"no k satisfies the expectation inequality for d={d}")


def compute_ksscm(d: int, report: ThresholdReport | None = None) -> int:
    """Largest K with every d/2 < k <= K passing (P2) and (P1); scans upward."""
    if d < 3:
        raise ValueError("d must be >= 3")
    k0 = (d + 2) // 2  # ceil((d+1)/2)
    best = None
    k = k0
    while k < d:
        p2 = check_P2((d, k))
        if report is not None:
            report.p2_holds[k] = p2
        if not p2:
            break
        p1 = check_P1((d, k))
        if report is not None:
            report.p1_holds[k] = p1
        if not p1:
            break
        best = k
        k += 1
    if best is None:
        raise AssertionError(f"k={k0} fails P1/P2 for d={d}")
    return best


def threshold_report(d: int) -> ThresholdReport:
    rep = ThresholdReport(d=d, ksscm=0, kplus=0)
    rep.ksscm = compute_ksscm(d, rep)
    rep.kplus = compute_kplus(d)
    for k in range(d // 2 + 1, d):
        if 2 * k > d:
            val, gt = c_value((d, k))
            rep.c_value[k] = mpmath.nstr(val, 15)
            rep.c_gt_one[k] = gt
    return rep


# --------------------------------------------------------------------------
# high-precision evaluations


def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _peval(poly: RationalPolynomial, x):
    acc = mpmath.mpf(0)
    for c in reversed(poly.coeffs):
        acc = acc * x + _mp(c)
    return acc


def eta(params, x):
    p = _params(params)
    p.require_above_half()
    d, k = p.d, p.k
    with mpmath.workdps(WORKING_DPS):
        x = _mp(x)
        if x < 0:
            raise ValueError("eta needs x >= 0")
        fx = _peval(build_f(p), x)
        return (2 * k - d) / ((d - k) + mpmath.sqrt((d - k) ** 2 + d * (2 * k - d) * fx))


def fhat(params, x):
    """k(1+eta) f / ((x+1) f') - 1; zero exactly at the interior stationary points."""
    p = _params(params)
    with mpmath.workdps(WORKING_DPS):
        x = _mp(x)
        if x <= 0:
            raise ValueError("fhat needs x > 0")
        f = build_f(p)
        fx = _peval(f, x)
        fpx = _peval(f.derivative(), x)
        return p.k * (1 + eta(p, x)) * fx / ((x + 1) * fpx) - 1


def c_power(d: int, k: int) -> tuple[PowerProduct, PowerProduct]:
    """(numerator, denominator) of c(d,k)^d as power products."""
    num = PowerProduct([(math.comb(d, k), d), (k, 2 * k)])
    den = PowerProduct([(2, k * (d - 2)), (d, d), (2 * k - d, 2 * k - d)])
    return num, den


def c_value(params):
    """First-moment growth base c(d,k) and whether it exceeds 1 (decided exactly)."""
    p = _params(params)
    p.require_above_half()
    d, k = p.d, p.k
    num, den = c_power(d, k)
    gt = power_product_compare(num, den) is Ordering.GREATER
    with mpmath.workdps(WORKING_DPS):
        val = mpmath.binomial(d, k) * mpmath.power(k, mpmath.mpf(2 * k) / d) / (
            mpmath.power(2, mpmath.mpf(k * (d - 2)) / d) * d * mpmath.power(2 * k - d, mpmath.mpf(2 * k - d) / d)
        )
    return val, gt


def default_grid(params, points: int = 400) -> list:
    """Evenly spaced x-values strictly inside the P1 interval (or (0, (5k-2d)/(d-k)) without P2)."""
    p = _params(params)
    if check_P2(p):
        iv = p1_interval(p)
        lo, hi = iv.lo, iv.hi
    else:
        lo, hi = Fraction(0), Fraction(5 * p.k - 2 * p.d, p.d - p.k)
    step = (hi - lo) / (points + 1)
    grid = [lo + step * (i + 1) for i in range(points)]
    if 1 not in grid and lo < 1 < hi:
        grid.append(Fraction(1))
        grid.sort()
    return grid


def plot_fhat(params, grid: Sequence | None = None) -> list[tuple]:
    p = _params(params)
    if grid is None:
        grid = default_grid(p)
    out = []
    for x in grid:
        if x <= 0:
            raise ValueError("plot grid must be positive")
        out.append((x, fhat(p, x)))
    return out


def sign_changes(series) -> list[tuple]:
    """Consecutive grid pairs where f-hat changes sign (an exact zero counts once)."""
    crossings = []
    prev = None
    for x, v in series:
        s = 0 if abs(v) < mpmath.mpf(10) ** (-40) else (1 if v > 0 else -1)
        if s == 0:
            crossings.append((x, x))
            prev = None
            continue
        if prev is not None and prev[1] != s:
            crossings.append((prev[0], x))
        prev = (x, s)
    return crossings


def fhat_csv(series) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "fhat"])
    for x, v in series:
        w.writerow([mpmath.nstr(_mp(x), 17), mpmath.nstr(v, 17)])
    return buf.getvalue()


@dataclass
class AValues:
    A: object
    A1_closed: Fraction
    A1_numeric: object


def check_A(params, t) -> AValues:
    """A(t) = (t+1) g - d g / (2(d-k)) - t (t+1) g' / k, with the closed-form A'(1)."""
    p = _params(params)
    p.require_above_half()
    d, k = p.d, p.k
    g = build_g(p)
    t_poly = RationalPolynomial.x()
    A = (t_poly + 1) * g - g * Fraction(d, 2 * (d - k)) - t_poly * (t_poly + 1) * g.derivative() * Fraction(1, k)
    closed = Fraction(k * (4 * k - d - 2 - (2 * k - d) ** 2), 2 * d * (d - 1))
    with mpmath.workdps(WORKING_DPS):
        t = _mp(t)
        if t < 1:
            raise ValueError("check_A needs t >= 1")
        val = _peval(A, t)
        h = mpmath.mpf(10) ** -20
        numeric = (_peval(A, 1 + h) - _peval(A, 1 - h)) / (2 * h)
    return AValues(val, closed, numeric)


def build_A(params) -> RationalPolynomial:
    p = _params(params)
    d, k = p.d, p.k
    g = build_g(p)
    t_poly = RationalPolynomial.x()
    return (t_poly + 1) * g - g * Fraction(d, 2 * (d - k)) - t_poly * (t_poly + 1) * g.derivative() * Fraction(1, k)


def table1(dmax: int = 20) -> list[tuple[int, int, int]]:
    return [(d, compute_ksscm(d), compute_kplus(d)) for d in range(3, dmax + 1)]


def scan(dmax: int = 100, workers: int = 1) -> list[tuple[int, int, int]]:
    ds = list(range(3, dmax + 1))
    if workers <= 1:
        return [(d, compute_ksscm(d), compute_kplus(d)) for d in ds]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=workers) as pool:
        ks = list(pool.map(compute_ksscm, ds))
    return [(d, s, compute_kplus(d)) for d, s in zip(ds, ks)]
