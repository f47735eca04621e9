"""The scaled second-moment landscape: phi, psi, the stationary point b*,
gradient/Hessian, the closed-form Hessian determinant, and a multistart
ascent used to look for counterexamples to b* being the global maximum.

Coordinates are b = (b_0, ..., b_{d-k}); beta = sum b_i and
gamma = sum (k - i) b_i.  The domain K is {b >= 0, (d-k)/k <= beta <= d/(2k)}.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

WORKING_DPS = 50


def xcoef(d: int, k: int, i: int) -> int:
    """Multinomial d! / ((k-i)! i! i! (d-k-i)!): ordered k-set pairs meeting in k-i points."""
    if not 0 <= i <= d - k:
        raise ValueError(f"i must lie in [0, {d - k}], got {i}")
    f = math.factorial
    return f(d) // (f(k - i) * f(d - k - i) * f(i) ** 2)


def xcoefs(d: int, k: int) -> list[int]:
    return [xcoef(d, k, i) for i in range(d - k + 1)]


@dataclass
class LandscapePoint:
    d: int
    k: int
    b: list

    @property
    def beta(self):
        return sum(self.b)

    @property
    def gamma(self):
        return sum((self.k - i) * bi for i, bi in enumerate(self.b))

    def in_K(self) -> bool:
        lo, hi = Fraction(self.d - self.k, self.k), Fraction(self.d, 2 * self.k)
        return all(bi >= 0 for bi in self.b) and lo <= self.beta <= hi

    def as_array(self) -> np.ndarray:
        return np.array([float(bi) for bi in self.b])


@dataclass
class LandscapeEval:
    phi: object
    psi: object = None
    grad: np.ndarray | None = None
    hessian: np.ndarray | None = None


def bstar(d: int, k: int) -> LandscapePoint:
    if not d < 2 * k < 2 * d:
        raise ValueError(f"bstar needs d/2 < k < d, got (d,k)=({d},{k})")
    scale = Fraction(d, 2 * k) ** 2 / math.comb(d, k) ** 2
    return LandscapePoint(d, k, [scale * x for x in xcoefs(d, k)])


# --------------------------------------------------------------------------
# scalar evaluations (mpmath when given Fractions/mpf, float otherwise)


def _xlogx(v, log):
    if v == 0:
        return 0
    if isinstance(v, float) and -1e-12 < v < 0:  # rounding at a face of K
        return 0.0
    return v * log(v)


def _to_mp(v):
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpf(v)


def phi(d: int, k: int, b, *, high_precision: bool = False):
    """phi(b) with the 0 log 0 = 0 convention, so boundary points are admissible."""
    if high_precision:
        with mpmath.workdps(WORKING_DPS):
            bb = [_to_mp(v) for v in b]
            return _phi_impl(d, k, bb, mpmath.log, mpmath.mpf)
    bb = [float(v) for v in b]
    return _phi_impl(d, k, bb, math.log, float)


def _phi_impl(d, k, b, log, num):
    xs = xcoefs(d, k)
    beta = sum(b)
    gamma = sum((k - i) * bi for i, bi in enumerate(b))
    lmu = log(num(math.comb(d, k)))
    out = (
        _xlogx(gamma, log)
        + _xlogx(num(d) / 2 - gamma, log)
        - 2 * _xlogx(num(d) / (2 * k) - beta, log)
        - _xlogx(1 - num(d) / k + beta, log)
        - 2 * beta * lmu
    )
    for x, bi in zip(xs, b):
        if bi != 0:
            out += bi * log(num(x)) - bi * log(bi)
    return out


def psi(d: int, k: int, b, *, high_precision: bool = False):
    """Polynomial correction factor; defined only strictly inside K."""
    with mpmath.workdps(WORKING_DPS):
        bb = [_to_mp(v) for v in b]
        beta = sum(bb)
        gamma = sum((k - i) * bi for i, bi in enumerate(bb))
        hi = mpmath.mpf(d) / (2 * k) - beta
        lo = 1 - mpmath.mpf(d) / k + beta
        if any(bi <= 0 for bi in bb) or hi <= 0 or lo <= 0 or not 0 < gamma < mpmath.mpf(d) / 2:
            raise ValueError("psi undefined on the boundary of K")
        prod = mpmath.fprod(bb)
        val = mpmath.sqrt(gamma * (mpmath.mpf(d) / 2 - gamma) / (hi**2 * lo * prod))
        return val if high_precision else float(val)


def phi_psi(d: int, k: int, p: LandscapePoint, high_precision: bool = True) -> LandscapeEval:
    ev = LandscapeEval(phi=phi(d, k, p.b, high_precision=high_precision))
    try:
        ev.psi = psi(d, k, p.b, high_precision=high_precision)
    except ValueError:
        ev.psi = None
    return ev


def _interior_terms(d, k, b):
    beta = float(np.sum(b))
    gamma = float(np.dot(k - np.arange(len(b)), b))
    hi = d / (2 * k) - beta
    lo = 1 - d / k + beta
    if np.any(b <= 0) or hi <= 0 or lo <= 0 or not 0 < gamma < d / 2:
        raise ValueError("gradient undefined on the boundary of K")
    return beta, gamma, hi, lo


def grad_phi(d: int, k: int, b) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    _, gamma, hi, lo = _interior_terms(d, k, b)
    w = k - np.arange(d - k + 1)
    logx = np.log(np.array(xcoefs(d, k), dtype=float))
    return (
        -2 * math.log(math.comb(d, k))
        + logx
        + w * math.log(gamma)
        - w * math.log(d / 2 - gamma)
        - np.log(b)
        + 2 * math.log(hi)
        - math.log(lo)
    )


def hessian_phi(d: int, k: int, b) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    _, gamma, hi, lo = _interior_terms(d, k, b)
    w = (k - np.arange(d - k + 1)).astype(float)
    H = np.outer(w, w) * (1 / gamma + 1 / (d / 2 - gamma))
    H -= np.diag(1 / b)
    H -= 2 / hi + 1 / lo
    return H


def phi_array(d: int, k: int, b: np.ndarray) -> float:
    """Vectorised float phi for the ascent loop (b strictly inside K)."""
    beta = b.sum()
    gamma = float(np.dot(k - np.arange(len(b)), b))
    return _phi_impl(d, k, list(b), math.log, float) if np.any(b == 0) else (
        gamma * math.log(gamma)
        + (d / 2 - gamma) * math.log(d / 2 - gamma)
        - 2 * (d / (2 * k) - beta) * math.log(d / (2 * k) - beta)
        - (1 - d / k + beta) * math.log(1 - d / k + beta)
        - 2 * beta * math.log(math.comb(d, k))
        + float(np.dot(b, np.log(np.array(xcoefs(d, k), dtype=float)) - np.log(b)))
    )


# --------------------------------------------------------------------------
# closed forms at b*


def phi_bstar_closed(d: int, k: int):
    with mpmath.workdps(WORKING_DPS):
        L = mpmath.log
        return (
            mpmath.mpf(d * (k - 2)) / (2 * k) * L(d)
            + 2 * L(k)
            - (d - 2) * L(2)
            - mpmath.mpf(2 * k - d) / k * L(2 * k - d)
        )


def psi_bstar_closed(d: int, k: int):
    with mpmath.workdps(WORKING_DPS):
        prod = mpmath.fprod(_to_mp(v) for v in bstar(d, k).b)
        return mpmath.mpf(2 * k**3) / (2 * k - d) ** 2 / mpmath.sqrt(prod)


def boundary_point(d: int, k: int) -> LandscapePoint:
    """a = (d/(2k), 0, ..., 0): beta = d/(2k), gamma = d/2."""
    return LandscapePoint(d, k, [Fraction(d, 2 * k)] + [Fraction(0)] * (d - k))


def phi_boundary_closed(d: int, k: int):
    """phi(a) by direct substitution.

    The log d coefficient is d(k-1)/(2k); the printed version with d(k-1)/k
    disagrees with phi itself and with the stated equivalence phi(b*) > phi(a)
    iff c(d,k) > 1, both of which this form satisfies.
    """
    with mpmath.workdps(WORKING_DPS):
        L = mpmath.log
        return (
            mpmath.mpf(d * (k - 1)) / (2 * k) * L(d)
            + L(k)
            - mpmath.mpf(2 * k - d) / (2 * k) * L(2 * k - d)
            - mpmath.mpf(d - 2) / 2 * L(2)
            - mpmath.mpf(d) / (2 * k) * L(math.comb(d, k))
        )


@dataclass
class RankTwoHessian:
    """-H* = diag(diag) + v v^T - w w^T."""

    diag: list
    v: list
    w: list

    def matrix(self) -> np.ndarray:
        D = np.diag([float(x) for x in self.diag])
        v = np.array([float(x) for x in self.v])
        w = np.array([float(x) for x in self.w])
        return D + np.outer(v, v) - np.outer(w, w)


def rank_two_structure(d: int, k: int) -> RankTwoHessian:
    with mpmath.workdps(WORKING_DPS):
        bs = bstar(d, k).b
        diag = [1 / _to_mp(x) for x in bs]
        vi = mpmath.mpf(2 * k) / (2 * k - d) * mpmath.sqrt(mpmath.mpf(4 * k - d) / d)
        v = [vi] * len(bs)
        w = [(k - i) * mpmath.sqrt(mpmath.mpf(8) / d) for i in range(len(bs))]
        return RankTwoHessian(diag, v, w)


def det_rank_two(diag, v, w):
    """det(D + v v^T - w w^T) for diagonal D, via two matrix-determinant-lemma steps."""
    with mpmath.workdps(WORKING_DPS):
        sv = mpmath.fsum(vi**2 / di for vi, di in zip(v, diag))
        sw = mpmath.fsum(wi**2 / di for wi, di in zip(w, diag))
        svw = mpmath.fsum(vi * wi / di for vi, wi, di in zip(v, w, diag))
        return ((1 + sv) * (1 - sw) + svw**2) * mpmath.fprod(diag)


def det_negH_closed(d: int, k: int):
    gap = 4 * k - d - 2 - (2 * k - d) ** 2
    if gap <= 0:
        raise ValueError("det(-H*) closed form needs 4k-d-2 > (2k-d)^2")
    with mpmath.workdps(WORKING_DPS):
        inv_prod = mpmath.fprod(1 / _to_mp(x) for x in bstar(d, k).b)
        return mpmath.mpf(2 * k**2) / ((d - 1) * (2 * k - d) ** 2) * gap * inv_prod


def hessian_fd_det(d: int, k: int, rel_step: float = 1e-12):
    """det(-H) at b* from central second differences of phi in high precision."""
    with mpmath.workdps(WORKING_DPS + 30):
        b0 = [_to_mp(x) for x in bstar(d, k).b]
        m = len(b0)
        hs = [x * mpmath.mpf(rel_step) for x in b0]

        def f(bb):
            return _phi_impl(d, k, bb, mpmath.log, mpmath.mpf)

        H = mpmath.matrix(m, m)
        for i in range(m):
            for j in range(i, m):
                vals = []
                for si, sj in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                    bb = list(b0)
                    bb[i] += si * hs[i]
                    bb[j] += sj * hs[j]
                    vals.append(f(bb))
                H[i, j] = H[j, i] = (vals[0] - vals[1] - vals[2] + vals[3]) / (4 * hs[i] * hs[j])
        return mpmath.det(-H)


def negH_is_positive_definite(d: int, k: int) -> bool:
    negH = -hessian_phi(d, k, bstar(d, k).as_array())
    try:
        np.linalg.cholesky(negH)
    except np.linalg.LinAlgError:
        return False
    return True


def second_moment_constants(d: int, k: int) -> dict:
    """Prefactor and per-n log-rate of E Y^2 implied by the Laplace summation at b*,
    alongside the matching quantities for (E Y)^2."""
    with mpmath.workdps(WORKING_DPS):
        m = d - k + 1
        phi_s = phi(d, k, bstar(d, k).b, high_precision=True)
        psi_s = psi_bstar_closed(d, k)
        det = det_negH_closed(d, k)
        # (2pi)^{m/2} psi / sqrt(det) * A_n n^{m/2}, with A_n n^{m/2} = d^{-dn/2} mu^{dn/k} / (sqrt2 (2pi)^{m/2})
        prefactor = psi_s / (mpmath.sqrt(2) * mpmath.sqrt(det))
        rate = phi_s - mpmath.mpf(d) / 2 * mpmath.log(d) + mpmath.mpf(d) / k * mpmath.log(math.comb(d, k))
        from .thresholds import c_value

        c, _ = c_value((d, k))
        return {
            "m": m,
            "EY2_prefactor": prefactor,
            "EY2_rate": rate,
            "EY_sq_prefactor": mpmath.mpf(k) ** 2 / (2 * k - d),
            "EY_sq_rate": mpmath.mpf(d) / k * mpmath.log(c),
        }


# --------------------------------------------------------------------------
# multistart ascent


@dataclass
class MaximizeOptions:
    starts: int = 200
    seed: int = 0
    max_iter: int = 5000
    grad_tol: float = 1e-11
    grid_parts: int = 6
    boundary_fraction: float = 0.3


@dataclass
class MaximizeResult:
    argmax: LandscapePoint
    value: float
    matches_bstar: bool
    bstar_value: float
    distance: float
    runs: list = field(default_factory=list)
    grid_best: float = float("-inf")


def _bounds(d, k):
    return (d - k) / k, d / (2 * k)


def project_to_K(d: int, k: int, b: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Clamp negatives to 0, then slide toward target (an interior point) until beta is in range."""
    b = np.maximum(np.asarray(b, dtype=float), 0.0)
    lo, hi = _bounds(d, k)
    beta = b.sum()
    if lo <= beta <= hi:
        return b
    tb = target.sum()
    # aim just inside the face so float rounding cannot push beta across it
    margin = 1e-12 * (hi - lo)
    goal = hi - margin if beta > hi else lo + margin
    t = (beta - goal) / (beta - tb)
    return b + t * (target - b)


def _strict_interior(d, k, b):
    # same expressions as phi/grad so float rounding agrees
    beta = float(np.sum(b))
    gamma = float(np.dot(k - np.arange(len(b)), b))
    return bool(np.all(b > 0)) and d / (2 * k) - beta > 0 and 1 - d / k + beta > 0 and 0 < gamma < d / 2


def _ascend(d, k, b, opts: MaximizeOptions):
    """Mirror-style gradient ascent (steps scaled by b) with backtracking, then Newton polish."""
    f = phi_array(d, k, b)
    step = 0.1
    for it in range(opts.max_iter):
        g = grad_phi(d, k, b)
        direction = b * g
        if np.max(np.abs(g)) < 1e-7:
            break
        while True:
            cand = b + step * direction
            if _strict_interior(d, k, cand):
                fc = phi_array(d, k, cand)
                if fc > f:
                    b, f = cand, fc
                    step = min(step * 2, 1e3)
                    break
            step /= 2
            if step < 1e-18:
                break
        if step < 1e-18:
            break
    # Newton polish where the Hessian is negative definite
    for _ in range(50):
        g = grad_phi(d, k, b)
        if np.max(np.abs(g)) < opts.grad_tol:
            break
        H = hessian_phi(d, k, b)
        try:
            np.linalg.cholesky(-H)
        except np.linalg.LinAlgError:
            break
        delta = np.linalg.solve(-H, g)
        t = 1.0
        while t > 1e-12:
            cand = b + t * delta
            if _strict_interior(d, k, cand) and phi_array(d, k, cand) >= f - 1e-13:
                b, f = cand, phi_array(d, k, cand)
                break
            t /= 2
        else:
            break
    return b, f


def _start_points(d, k, opts: MaximizeOptions, rng: np.random.Generator, target):
    m = d - k + 1
    lo, hi = _bounds(d, k)
    n_boundary = int(opts.starts * opts.boundary_fraction)
    pts = []
    for s in range(opts.starts):
        direction = rng.dirichlet(np.ones(m))
        if s < opts.starts - n_boundary:
            beta = rng.uniform(lo, hi)
            b = beta * direction
        else:
            # near a face: tiny coordinates or beta at an end of its range
            beta = lo + (hi - lo) * (1e-6 if s % 2 else 1 - 1e-6)
            b = beta * direction
            zero = rng.integers(0, m)
            b[zero] = 1e-9
        b = project_to_K(d, k, b, target)
        b = np.maximum(b, 1e-12)
        if not _strict_interior(d, k, b):
            b = 0.999 * b + 0.001 * target
        pts.append(b)
    return pts


def _grid_best(d, k, parts):
    """Best phi over a coarse grid: compositions of ``parts`` scaled to several beta levels."""
    m = d - k + 1
    lo, hi = _bounds(d, k)
    best, arg = float("-inf"), None
    for beta in np.linspace(lo, hi, 7):
        for comp in itertools.combinations(range(parts + m - 1), m - 1):
            bars = (-1,) + comp + (parts + m - 1,)
            counts = np.array([bars[i + 1] - bars[i] - 1 for i in range(m)], dtype=float)
            b = beta * counts / parts
            v = phi(d, k, b)
            if v > best:
                best, arg = v, b
    return best, arg


def maximize_phi(d: int, k: int, options: MaximizeOptions | None = None) -> MaximizeResult:
    """Multistart local ascent over K; a falsification harness, not a proof of global optimality."""
    opts = options or MaximizeOptions()
    if d < 5:
        warnings.warn(f"(d,k)=({d},{k}) is outside the range where b* is known to be the global max")
    bs = bstar(d, k)
    target = bs.as_array()
    f_star = float(phi(d, k, bs.b, high_precision=True))
    rng = np.random.default_rng(opts.seed)
    best_b, best_f = None, float("-inf")
    runs = []
    for i, b0 in enumerate(_start_points(d, k, opts, rng, target)):
        b, f = _ascend(d, k, b0, opts)
        runs.append((i, b.tolist(), f))
        if f > best_f:
            best_b, best_f = b, f
    grid_f, grid_b = _grid_best(d, k, opts.grid_parts)
    if grid_f > best_f:
        best_b, best_f = grid_b, grid_f
    dist = float(np.max(np.abs(best_b - target)))
    matches = dist < 1e-6 and abs(best_f - f_star) < 1e-9
    return MaximizeResult(
        argmax=LandscapePoint(d, k, best_b.tolist()),
        value=best_f,
        matches_bstar=matches,
        bstar_value=f_star,
        distance=dist,
        runs=runs,
        grid_best=grid_f,
    )


def runs_csv(result: MaximizeResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["start", "point", "value"])
    for i, b, f in result.runs:
        w.writerow([i, " ".join(f"{x:.17g}" for x in b), f"{f:.17g}"])
    return buf.getvalue()
