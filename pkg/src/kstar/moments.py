"""First and second moments of the number Y of k-star orientations of a
random pairing, the short-cycle parameters, and closed-form limits.

Finite-n quantities are exact Fractions; limits are mpmath values.  The
``enumerate_*`` helpers are brute-force oracles over every pairing and are
only meant for dn <= 12 or so.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import mpmath

from .pairing import m_pairings

WORKING_DPS = 60
DOMAIN_CAP = 10**7


def _check_n(n: int, d: int, k: int):
    if n < 1 or (d * n) % (2 * k) != 0:
        raise ValueError(f"need 2k | dn, got n={n}, d={d}, k={k}")


# --------------------------------------------------------------------------
# short cycles


@dataclass(frozen=True)
class CycleParams:
    j: int
    lam: Fraction
    delta: Fraction

    @property
    def limit_factor(self) -> Fraction:
        """lambda_j (1 + delta_j), the limiting factorial-moment factor."""
        return self.lam * (1 + self.delta)


def cycle_params(d: int, k: int, j: int) -> CycleParams:
    if d < 3 or j < 1:
        raise ValueError("need d >= 3 and j >= 1")
    lam = Fraction((d - 1) ** j, 2 * j)
    delta = Fraction(d - 2 * k + 1, d - 1) ** j
    return CycleParams(j, lam, delta)


def _series_gap(d: int, k: int) -> int:
    return 4 * k - d - 2 - (2 * k - d) ** 2


def sum_lambda_delta_sq(d: int, k: int, terms: int = 0):
    """Closed form of sum_j lambda_j delta_j^2; with ``terms`` also returns partial sums."""
    if not (d < 2 * k and _series_gap(d, k) > 0):
        raise ValueError("series condition fails")
    with mpmath.workdps(WORKING_DPS):
        closed = mpmath.log(mpmath.mpf(d - 1) / _series_gap(d, k)) / 2
        if not terms:
            return closed
        partial = []
        acc = mpmath.mpf(0)
        ratio = mpmath.mpf((d + 1 - 2 * k) ** 2) / (d - 1)
        term = mpmath.mpf(1)
        for j in range(1, terms + 1):
            term *= ratio
            acc += term / (2 * j)
            partial.append(+acc)
        return closed, partial


def variance_ratio_limit(d: int, k: int):
    gap = _series_gap(d, k)
    if gap <= 0:
        raise ValueError("variance ratio needs 4k-d-2 > (2k-d)^2")
    with mpmath.workdps(WORKING_DPS):
        return mpmath.sqrt(mpmath.mpf(d - 1) / gap)


# --------------------------------------------------------------------------
# first moments


def exact_EY(n: int, d: int, k: int) -> Fraction:
    """E Y over the pairing model: choose centres, their in-points, then match in to out."""
    _check_n(n, d, k)
    centres = d * n // (2 * k)
    if centres > n:
        return Fraction(0)
    num = math.comb(n, centres) * math.comb(d, k) ** centres * math.factorial(d * n // 2)
    return Fraction(num, m_pairings(d * n // 2))


def asympt_EY(n: int, d: int, k: int):
    if not 2 * k > d:
        raise ValueError("asympt_EY needs 2k > d")
    _check_n(n, d, k)
    from .thresholds import c_value

    with mpmath.workdps(WORKING_DPS):
        base, _ = c_value((d, k))
        return k / mpmath.sqrt(2 * k - d) * mpmath.power(base, mpmath.mpf(d * n) / (2 * k))


def exact_EZ(n: int, d: int, s: int) -> Fraction:
    """Expected number of independent s-sets in the pairing model on n cells of d points."""
    if s < 0 or 2 * s > n or (d * n) % 2:
        raise ValueError(f"need 0 <= s <= n/2 and dn even, got n={n}, d={d}, s={s}")
    free = d * n - d * s
    falling = math.perm(free, d * s)
    return Fraction(math.comb(n, s) * falling * m_pairings((d * n - 2 * d * s) // 2), m_pairings(d * n // 2))


def hd_alpha(d: int, alpha):
    """Exponential rate of E Z_alpha: (d-1)(1-a)log(1-a) - a log a - d/2 (1-2a) log(1-2a)."""
    with mpmath.workdps(WORKING_DPS):
        a = mpmath.mpf(alpha.numerator) / alpha.denominator if isinstance(alpha, Fraction) else mpmath.mpf(alpha)
        if not 0 <= a < mpmath.mpf(1) / 2:
            raise ValueError("hd_alpha needs 0 <= alpha < 1/2")

        def xlogx(v):
            return mpmath.mpf(0) if v == 0 else v * mpmath.log(v)

        return (d - 1) * xlogx(1 - a) - xlogx(a) - mpmath.mpf(d) / 2 * xlogx(1 - 2 * a)


def hd_root(d: int):
    """The unique zero of hd_alpha on (0, 1/2)."""
    with mpmath.workdps(WORKING_DPS):
        return mpmath.findroot(lambda a: hd_alpha(d, a), (mpmath.mpf(10) ** -30, mpmath.mpf(1) / 2 - mpmath.mpf(10) ** -30), solver="anderson")


# --------------------------------------------------------------------------
# second moment


def _xcoefs(d: int, k: int) -> list[int]:
    f = math.factorial
    return [f(d) // (f(k - i) * f(d - k - i) * f(i) ** 2) for i in range(d - k + 1)]


def domain_size(n: int, d: int, k: int) -> int:
    m = d - k + 1
    lo = -(-(d - k) * n // k)
    hi = d * n // (2 * k)
    return sum(math.comb(s + m - 1, m - 1) for s in range(max(lo, 0), hi + 1))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def exact_EY2(n: int, d: int, k: int, cap: int = DOMAIN_CAP) -> Fraction:
    """E Y^2 as the exact lattice sum over overlap profiles B = (B_0..B_{d-k})."""
    _check_n(n, d, k)
    if not 2 * k > d:
        raise ValueError("exact_EY2 needs 2k > d")
    size = domain_size(n, d, k)
    if size > cap:
        raise ValueError(f"domain has {size} lattice points, above cap {cap}")
    f = math.factorial
    mu = math.comb(d, k)
    xs = _xcoefs(d, k)
    half = d * n // 2
    c = d * n // (2 * k)
    lo = -(-(d - k) * n // k)
    total = 0
    for s in range(max(lo, 0), c + 1):
        both_leaf = n - 2 * c + s
        if both_leaf < 0:
            continue
        # multinomial(n; B, c-s, c-s, n-2c+s) without the B_i! part, and the mu powers
        outer = f(n) // (f(c - s) ** 2 * f(both_leaf)) * mu ** (2 * c - 2 * s)
        for B in _compositions(s, d - k + 1):
            gamma = sum((k - i) * b for i, b in enumerate(B))
            if gamma > half:
                continue
            term = outer * f(gamma) * f(half - gamma)
            denom = 1
            for x, b in zip(xs, B):
                term *= x**b
                denom *= f(b)
            total += Fraction(term, denom)
    return total / m_pairings(half)


# --------------------------------------------------------------------------
# brute-force oracles over all pairings


def enumerate_pairings(points: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """Every perfect matching of range(points), pairing the smallest free point first."""
    if points % 2:
        raise ValueError("odd number of points")

    def rec(free: tuple[int, ...]):
        if not free:
            yield ()
            return
        a = free[0]
        for idx in range(1, len(free)):
            b = free[idx]
            rest = free[1:idx] + free[idx + 1 :]
            for tail in rec(rest):
                yield ((a, b),) + tail

    yield from rec(tuple(range(points)))


def count_orientations(pairs, n: int, d: int, k: int) -> int:
    """Y(P): orientations of the pairs with every cell's in-degree allowed.

    For 2k > d the allowed in-degrees are {0, k}; otherwise multiples of k.
    """
    m = len(pairs)
    cells = [(a // d, b // d) for a, b in pairs]
    allowed = {0, k} if 2 * k > d else set(range(0, d + 1, k))
    count = 0
    for mask in range(1 << m):
        indeg = [0] * n
        for e, (u, v) in enumerate(cells):
            indeg[v if (mask >> e) & 1 else u] += 1
        if all(x in allowed for x in indeg):
            count += 1
    return count


def enumerate_moments(n: int, d: int, k: int) -> tuple[Fraction, Fraction]:
    """(E Y, E Y^2) by enumerating every pairing and every orientation."""
    total = total_sq = 0
    npair = 0
    for P in enumerate_pairings(n * d):
        y = count_orientations(P, n, d, k)
        total += y
        total_sq += y * y
        npair += 1
    assert npair == m_pairings(n * d // 2)
    return Fraction(total, npair), Fraction(total_sq, npair)


def enumerate_EZ(n: int, d: int, s: int) -> Fraction:
    """Average number of independent s-sets (no pair inside the set) over all pairings."""
    total = npair = 0
    subsets = list(itertools.combinations(range(n), s))
    for P in enumerate_pairings(n * d):
        cells = [(a // d, b // d) for a, b in P]
        for S in subsets:
            ss = set(S)
            if not any(u in ss and v in ss for u, v in cells):
                total += 1
        npair += 1
    return Fraction(total, npair)


@dataclass
class MomentReport:
    n: int
    d: int
    k: int
    exact_EY: Fraction
    asympt_EY: object
    exact_EY2: Fraction | None
    variance_ratio_limit: object
    sum_lambda_delta_sq: object


def moment_report(d: int, k: int, n: int, cap: int = DOMAIN_CAP) -> MomentReport:
    ey2 = exact_EY2(n, d, k, cap) if domain_size(n, d, k) <= cap else None
    has_limit = _series_gap(d, k) > 0
    return MomentReport(
        n=n,
        d=d,
        k=k,
        exact_EY=exact_EY(n, d, k),
        asympt_EY=asympt_EY(n, d, k),
        exact_EY2=ey2,
        variance_ratio_limit=variance_ratio_limit(d, k) if has_limit else None,
        sum_lambda_delta_sq=sum_lambda_delta_sq(d, k) if has_limit else None,
    )
