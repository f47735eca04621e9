"""Exact univariate polynomials over Q, Sturm-chain root counting/isolation,
and exact comparison of integer power products.

Nothing in this module touches floating point.  Internally the Sturm chain
is carried as primitive integer polynomials (pseudo-remainders with the
content divided out) because Fraction arithmetic on long remainder
sequences is dominated by gcd normalisation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

Rational = Fraction


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class RationalPolynomial:
    """Polynomial with exact rational coefficients, ``coeffs[i]`` multiplies x**i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "RationalPolynomial":
        return cls([0, 1])

    @classmethod
    def constant(cls, c) -> "RationalPolynomial":
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __repr__(self) -> str:
        return f"RationalPolynomial({[str(c) for c in self.coeffs]})"

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == RationalPolynomial([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def _coerce(self, other) -> "RationalPolynomial":
        if isinstance(other, RationalPolynomial):
            return other
        return RationalPolynomial([other])

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return RationalPolynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalPolynomial(c * other for c in self.coeffs)
        o = self._coerce(other)
        if self.is_zero() or o.is_zero():
            return RationalPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result = RationalPolynomial([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, x):
        """Evaluate exactly at a rational (or any numeric type supporting * and +)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "RationalPolynomial":
        return RationalPolynomial(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def divmod(self, other: "RationalPolynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree
        lb = other.lead()
        q = [Fraction(0)] * max(len(r) - db, 1)
        while len(r) - 1 >= db and r:
            shift = len(r) - 1 - db
            c = r[-1] / lb
            q[shift] = c
            for j, b in enumerate(other.coeffs):
                r[shift + j] -= c * b
            while r and r[-1] == 0:
                r.pop()
        return RationalPolynomial(q), RationalPolynomial(r)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "RationalPolynomial":
        if self.is_zero():
            return self
        return self * (1 / self.lead())

    def gcd(self, other: "RationalPolynomial") -> "RationalPolynomial":
        a, b = _primitive(_to_int(self)), _primitive(_to_int(other))
        return RationalPolynomial(_int_gcd(a, b)).monic()

    def strip_x_power(self) -> tuple["RationalPolynomial", int]:
        """Factor out the largest power of x; returns (p / x^m, m)."""
        m = 0
        while m < len(self.coeffs) and self.coeffs[m] == 0:
            m += 1
        return RationalPolynomial(self.coeffs[m:]), m

    def integer_primitive(self) -> list[int]:
        """Positive rational multiple with coprime integer coefficients."""
        return _primitive(_to_int(self))


# --------------------------------------------------------------------------
# integer polynomial kernels (lists, low degree first)


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _to_int(p: RationalPolynomial) -> list[int]:
    if p.is_zero():
        return []
    den = reduce(math.lcm, (c.denominator for c in p.coeffs), 1)
    return [int(c * den) for c in p.coeffs]


def _content(a: Sequence[int]) -> int:
    g = 0
    for c in a:
        g = math.gcd(g, c)
        if g == 1:
            break
    return g


def _primitive(a: list[int]) -> list[int]:
    a = _trim(list(a))
    if not a:
        return a
    g = _content(a)
    if g > 1:
        a = [c // g for c in a]
    return a


def _int_derivative(a: Sequence[int]) -> list[int]:
    return [i * c for i, c in enumerate(a) if i > 0]


def _prem_signed(a: list[int], b: list[int]) -> list[int]:
    """Positive multiple of the Euclidean remainder of a by b."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    steps = len(a) - len(b) + 1
    while r and len(r) - 1 >= db:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [lb * c for c in r]
        for j, c in enumerate(b):
            r[shift + j] -= lr * c
        _trim(r)
        steps -= 1
    # r = lb^(used steps) * remainder; fix the sign of the multiplier
    used = len(a) - len(b) + 1 - steps
    if lb < 0 and used % 2 == 1:
        r = [-c for c in r]
    return r


def _int_gcd(a: list[int], b: list[int]) -> list[int]:
    a, b = _primitive(a), _primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _primitive(_prem_signed(a, b))
        a, b = b, r
    if a and a[-1] < 0:
        a = [-c for c in a]
    return a


def _int_exact_div(a: list[int], b: list[int]) -> list[int]:
    """Quotient a/b over Q, returned as a primitive integer polynomial."""
    q, r = RationalPolynomial(a).divmod(RationalPolynomial(b))
    assert r.is_zero(), "inexact polynomial division"
    return _primitive(_to_int(q))


def _sign_at(a: Sequence[int], x: Fraction) -> int:
    """Sign of the integer polynomial a at the rational x (no division)."""
    if not a:
        return 0
    p, q = x.numerator, x.denominator
    acc = a[-1]
    qp = 1
    for c in reversed(a[:-1]):
        qp *= q
        acc = acc * p + c * qp
    return (acc > 0) - (acc < 0)


def squarefree_part(p: RationalPolynomial) -> RationalPolynomial:
    a = _primitive(_to_int(p))
    g = _int_gcd(a, _int_derivative(a))
    if len(g) <= 1:
        return RationalPolynomial(a)
    return RationalPolynomial(_int_exact_div(a, g))


@dataclass(frozen=True)
class SturmChain:
    """Sturm sequence of a square-free polynomial; polys are primitive integer lists."""

    polys: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, p: RationalPolynomial) -> "SturmChain":
        if p.is_zero():
            raise ValueError("indeterminate root set: zero polynomial")
        a = _primitive(_to_int(squarefree_part(p)))
        chain = [a]
        b = _primitive(_int_derivative(a))
        while b:
            chain.append(b)
            r = _prem_signed(chain[-2], chain[-1])
            b = _primitive([-c for c in r])
        return cls(tuple(tuple(c) for c in chain))

    @property
    def base(self) -> tuple[int, ...]:
        return self.polys[0]

    def variations(self, x: Fraction) -> int:
        v = 0
        last = 0
        for poly in self.polys:
            s = _sign_at(poly, x)
            if s == 0:
                continue
            if last and s != last:
                v += 1
            last = s
        return v

    def sign_at(self, x: Fraction) -> int:
        return _sign_at(self.polys[0], x)

    def count(self, iv: "RationalInterval") -> int:
        """Distinct roots in iv.  V(a)-V(b) counts roots in (a, b] for a square-free base."""
        lo, hi = iv.lo, iv.hi
        n = self.variations(lo) - self.variations(hi)
        if self.sign_at(hi) == 0 and iv.hi_open:
            n -= 1
        if self.sign_at(lo) == 0 and not iv.lo_open:
            n += 1
        return n


# --------------------------------------------------------------------------
# public types


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction
    lo_open: bool = True
    hi_open: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", _frac(self.lo))
        object.__setattr__(self, "hi", _frac(self.hi))
        if not self.lo < self.hi:
            raise ValueError(f"empty interval: lo={self.lo} hi={self.hi}")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        x = _frac(x)
        above = x > self.lo if self.lo_open else x >= self.lo
        below = x < self.hi if self.hi_open else x <= self.hi
        return above and below

    def open(self) -> "RationalInterval":
        return RationalInterval(self.lo, self.hi, True, True)


def root_count_in_interval(p: RationalPolynomial, iv: RationalInterval) -> int:
    """Number of distinct real roots of p inside iv (endpoints per openness flags)."""
    return SturmChain.of(p).count(iv)


def isolate_roots(p: RationalPolynomial | SturmChain, iv: RationalInterval) -> list[RationalInterval]:
    """Disjoint open intervals, each containing exactly one root of p, covering all roots in iv.

    A root hit exactly by a bisection point is wrapped in a small open
    interval around it, so every returned interval contains its root in
    the interior.
    """
    chain = p if isinstance(p, SturmChain) else SturmChain.of(p)
    out: list[RationalInterval] = []
    # endpoint roots, if the interval is closed there
    if not iv.lo_open and chain.sign_at(iv.lo) == 0:
        out.append(_wrap_exact_root(chain, iv.lo))
    if not iv.hi_open and chain.sign_at(iv.hi) == 0:
        out.append(_wrap_exact_root(chain, iv.hi))
    stack = [iv.open()]
    while stack:
        cur = stack.pop()
        n = chain.count(cur)
        if n == 0:
            continue
        if n == 1:
            out.append(cur)
            continue
        m = cur.midpoint
        if chain.sign_at(m) == 0:
            out.append(_wrap_exact_root(chain, m))
        stack.append(RationalInterval(m, cur.hi))
        stack.append(RationalInterval(cur.lo, m))
    out.sort(key=lambda r: r.lo)
    return out


def _wrap_exact_root(chain: SturmChain, r: Fraction) -> RationalInterval:
    eps = Fraction(1, 2)
    while True:
        cand = RationalInterval(r - eps, r + eps)
        if chain.count(cand) == 1:
            return cand
        eps /= 2


def refine_root(p: RationalPolynomial | SturmChain, iv: RationalInterval, width) -> RationalInterval:
    """Shrink an isolating interval by bisection until its width is <= width."""
    chain = p if isinstance(p, SturmChain) else SturmChain.of(p)
    width = _frac(width)
    if width <= 0:
        raise ValueError("width must be positive")
    cur = iv
    if chain.count(cur) != 1:
        raise ValueError("interval does not isolate exactly one root")
    while cur.width > width:
        m = cur.midpoint
        if chain.sign_at(m) == 0:
            half = width / 2
            lo = max(cur.lo, m - half)
            hi = min(cur.hi, m + half)
            return RationalInterval(lo, hi)
        left = RationalInterval(cur.lo, m, cur.lo_open, True)
        cur = left if chain.count(left) == 1 else RationalInterval(m, cur.hi, True, cur.hi_open)
    return cur


def sign_on_interval(p: RationalPolynomial | SturmChain, iv: RationalInterval) -> int | None:
    """Constant sign of p on the closed hull of iv, or None if p vanishes there."""
    chain = p if isinstance(p, SturmChain) else SturmChain.of(p)
    closed = RationalInterval(iv.lo, iv.hi, False, False)
    if chain.count(closed) != 0:
        return None
    return chain.sign_at(iv.midpoint)


# --------------------------------------------------------------------------
# power products


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@dataclass(frozen=True)
class PowerProduct:
    """prod(base ** exponent) over integer bases >= 1 and integer exponents."""

    factors: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    def __init__(self, factors: Iterable[tuple[int, int]] = ()):
        fs = tuple((int(b), int(e)) for b, e in factors)
        for b, _ in fs:
            if b < 1:
                raise ValueError(f"power product base must be >= 1, got {b}")
        object.__setattr__(self, "factors", fs)

    def value(self) -> Fraction:
        num, den = 1, 1
        for b, e in self.factors:
            if e >= 0:
                num *= b**e
            else:
                den *= b ** (-e)
        return Fraction(num, den)

    def __pow__(self, e: int) -> "PowerProduct":
        return PowerProduct((b, x * e) for b, x in self.factors)

    def __mul__(self, other: "PowerProduct") -> "PowerProduct":
        return PowerProduct(self.factors + other.factors)


def power_product_compare(lhs: PowerProduct, rhs: PowerProduct) -> Ordering:
    """Exact three-way comparison of two power products."""
    # cross-multiply so only nonnegative exponents remain
    ln, ld, rn, rd = 1, 1, 1, 1
    for b, e in lhs.factors:
        if e >= 0:
            ln *= b**e
        else:
            ld *= b ** (-e)
    for b, e in rhs.factors:
        if e >= 0:
            rn *= b**e
        else:
            rd *= b ** (-e)
    a, c = ln * rd, rn * ld
    return Ordering((a > c) - (a < c))
