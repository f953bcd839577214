"""Analytic side: the limiting discriminant CDF, local densities rho,
the mass function w(m), the conductor-distribution main term, and the
Euler-product identities used as numeric cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .intkernel import factor, sieve_primes, valuation, zeta_primes_removed

DISC_SUP = 496  # |disc| <= 496 H on the family box
DISC_HI = 64    # disc <= 64 H


@dataclass
class DistributionGrid:
    """Lambda sample points with CDF values, tagged theory or empirical."""

    lambdas: np.ndarray
    cdf: np.ndarray
    source: str  # "theory" | "empirical"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.lambdas = np.asarray(self.lambdas, dtype=float)
        self.cdf = np.asarray(self.cdf, dtype=float)
        if self.lambdas.shape != self.cdf.shape:
            raise ValueError("lambda and cdf grids differ in length")
        if np.any(np.diff(self.lambdas) <= 0):
            raise ValueError("lambdas must be strictly increasing")


# ---------------------------------------------------------------------------
# F_Delta: limiting CDF of disc/H over the unit (alpha, beta) box
# ---------------------------------------------------------------------------

F_DELTA_TOL = 1e-10


@lru_cache(maxsize=None)
def f_delta(lam: float, tol: float = F_DELTA_TOL) -> float:
    """Box-area fraction with -16(4 alpha^3 + 27 beta^2) < lam.

    Reduced to a 1-D integral over beta: for each beta the admissible
    alpha form the interval (c(beta), 1] with
    c(beta) = cbrt(-(lam + 432 beta^2) / 64), clamped to [-1, 1].
    """
    if lam <= -DISC_SUP:
        return 0.0
    if lam >= DISC_HI:
        return 1.0
    # clamp boundaries: c <= -1 for beta >= b_hi, c >= 1 for beta <= b_lo
    b_hi = math.sqrt((DISC_HI - lam) / 432.0)
    b_lo = math.sqrt(-(DISC_HI + lam) / 432.0) if lam < -DISC_HI else 0.0
    b_hi = min(b_hi, 1.0)

    def integrand(beta):
        u = -(lam + 432.0 * beta * beta) / 64.0
        c = math.copysign(abs(u) ** (1.0 / 3.0), u)
        return 0.5 * (1.0 - c)

    pts = []
    if lam < 0:
        mid = math.sqrt(-lam / 432.0)  # cube-root kink where c crosses 0
        if b_lo < mid < b_hi:
            pts.append(mid)
    val, _ = quad(integrand, b_lo, b_hi, points=pts or None,
                  epsabs=0.5 * tol, epsrel=0, limit=200)
    return min(1.0, max(0.0, val + (1.0 - b_hi)))


def f_delta_closed_zero() -> float:
    """Closed form F_Delta(0) = 1 - 2 / (15 sqrt(3))."""
    return 1.0 - 2.0 / (15.0 * math.sqrt(3.0))


# ---------------------------------------------------------------------------
# Local densities rho(p, m)
# ---------------------------------------------------------------------------


def rho_pn(p: int, n: int) -> Fraction:
    """Exact density for gcd(m, p^inf) = p^n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if p == 2:
        return (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))[n] if n <= 2 else Fraction(0)
    if p == 3:
        return Fraction(1) if n == 0 else Fraction(0)
    q = Fraction(1, p)
    if n == 0:
        return 1 - q * q
    lead = q ** (n + 1) * (1 - q)
    if n <= 2:
        return lead
    if n == 3:
        return lead * (1 - q)
    if n == 4:
        return lead * (2 - q)
    if n == 5 or n >= 9:
        return lead * (2 - 2 * q)
    return lead * (3 - 2 * q)  # n in {6, 7, 8}


def rho(p: int, m: int) -> Fraction:
    """Table value for (p, gcd(m, p^inf))."""
    if m < 1:
        raise ValueError("m must be >= 1")
    n = valuation(m, p) if m % p == 0 else 0
    return rho_pn(p, n)


def rho_column_sum(p: int, tol: float = 0.0) -> Fraction | float:
    """sum_n rho(p, p^n); exact 1 for p in {2, 3}, geometric tail for p >= 5."""
    if p in (2, 3):
        return sum(rho_pn(p, n) for n in range(4))
    total = sum(rho_pn(p, n) for n in range(9))
    # n >= 9 tail is geometric with ratio 1/p
    q = Fraction(1, p)
    tail = q**10 * (1 - q) * (2 - 2 * q) / (1 - q)
    return total + tail


# ---------------------------------------------------------------------------
# Mass function w(m) and the main term
# ---------------------------------------------------------------------------

ZETA_TOL = 1e-14


@lru_cache(maxsize=8)
def zeta_ratio(tol: float = 1e-14) -> float:
    """zeta^{(6)}(10) / zeta^{(6)}(2)."""
    return zeta_primes_removed(10.0, 6, tol) / zeta_primes_removed(2.0, 6, tol)


def zeta_ratio_closed_form() -> float:
    """Exact value 228811 pi^8 / 2380855680 of the zeta ratio."""
    return 228811 * math.pi**8 / 2380855680


def mass_rational(m: int) -> Fraction:
    """The exact rational coefficient of zeta^{(6)}(10)/zeta^{(6)}(2) in w(m):
    rho(2,m) rho(3,m) prod_{p>=5, p|m} rho(p,m)/(1 - p^-2)."""
    coeff = rho(2, m) * rho(3, m)
    for p in factor(m).prime_support:
        if p >= 5:
            coeff *= rho(p, m) / (1 - Fraction(1, p * p))
    return coeff


def mass_product_form(m: int, tol: float = ZETA_TOL) -> float:
    """w(m) via the product form zeta^{(6)}(10) prod_p rho(p, m).

    The infinite part prod_{p>=5, p not| m} (1 - p^-2) is folded into
    1/zeta^{(6m)}(2); the leftover is the exact rational
    rho(2,m) rho(3,m) prod_{p>=5, p|m} rho(p,m).
    """
    coeff = rho(2, m) * rho(3, m)
    for p in factor(m).prime_support:
        if p >= 5:
            coeff *= rho(p, m)
    return (zeta_primes_removed(10.0, 6, tol)
            / zeta_primes_removed(2.0, 6 * m, tol) * float(coeff))


def mass(m: int, tol: float = 1e-12) -> float:
    """w(m): limiting density of curves with |disc|/N = m."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return zeta_ratio(ZETA_TOL) * float(mass_rational(m))


def mass_majorant(m: int) -> float:
    """Pointwise bound w(m)/zr <= (1/m) prod_{p|m} 3/p (coefficient part)."""
    out = 1.0 / m
    for p in factor(m).prime_support:
        out *= 3.0 / p
    return out


def _rad_weight_sieve(limit: int) -> np.ndarray:
    """Array f[m] = prod_{p|m} 3/p for 1 <= m <= limit."""
    f = np.ones(limit + 1)
    for p in sieve_primes(limit):
        f[p::p] *= 3.0 / p
    f[0] = 0.0
    return f


def mass_tail_bound(M: int, prime_bound: int = 10**6) -> float:
    """Certified bound on sum_{m > M} w(m).

    Uses w(m) <= zr * (1/m) prod_{p|m} 3/p termwise and evaluates the
    majorant's full sum as the Euler product prod_p (1 + 3/(p(p-1)))
    (primes > prime_bound bounded by exp(3/prime_bound)), minus the
    partial sum through M.
    """
    total = 1.0
    for p in sieve_primes(prime_bound):
        total *= 1.0 + 3.0 / (p * (p - 1))
    total *= math.exp(3.0 / prime_bound)  # bound for the prime tail
    f = _rad_weight_sieve(M)
    partial = float(np.sum(f[1:] / np.arange(1, M + 1)))
    slack = 1e-9  # float round-off headroom
    return max(0.0, zeta_ratio(ZETA_TOL) * (total - partial) + slack)


def main_term(lam0: float, lam1: float, tol: float = 1e-9) -> float:
    """Limiting main term for the fraction with lam0 < N/H < lam1.

    For lam0 > 0 the series truncates exactly at m < 496/lam0. For
    lam0 = 0 the complement form is used: every term with
    m >= 496/lam1 vanishes identically, so the truncation is exact and
    the only numeric error is F_Delta quadrature.
    """
    if lam0 < 0 or lam1 <= lam0:
        raise ValueError("need 0 <= lam0 < lam1")
    if lam0 == 0:
        acc = 0.0
        m = 1
        while m * lam1 < DISC_SUP:
            w = mass(m)
            if w:
                acc += w * (1.0 - f_delta(m * lam1) + f_delta(-m * lam1))
            m += 1
        return min(1.0, max(0.0, 1.0 - acc))
    acc = 0.0
    m = 1
    while m * lam0 < DISC_SUP:
        w = mass(m)
        if w:
            acc += w * (f_delta(m * lam1) - f_delta(m * lam0)
                        + f_delta(-m * lam0) - f_delta(-m * lam1))
        m += 1
    return min(1.0, max(0.0, acc))


def theory_grid(lambdas, tol: float = 1e-9) -> DistributionGrid:
    """CDF grid of main_term(0, lam) over the given lambda values."""
    lambdas = np.asarray(lambdas, dtype=float)
    cdf = np.array([0.0 if lam <= 0 else main_term(0.0, lam, tol) for lam in lambdas])
    return DistributionGrid(lambdas, cdf, "theory", {"tol": tol})


def pdf_numeric(grid: DistributionGrid, dlam: float = 0.496):
    """Central finite differences (CDF(l+d) - CDF(l-d)) / (2d).

    The grid spacing must divide dlam; endpoints use one-sided
    differences. Returns a list of (lambda, density) pairs.
    """
    if dlam <= 0:
        raise ValueError("dlam must be positive")
    h = np.diff(grid.lambdas)
    if not np.allclose(h, h[0], rtol=1e-9, atol=1e-12):
        raise ValueError("pdf_numeric requires an evenly spaced grid")
    step = h[0]
    k = int(round(dlam / step))
    if k < 1 or abs(k * step - dlam) > 1e-9 * dlam:
        raise ValueError("grid too coarse for the requested dlam")
    lam, cdf = grid.lambdas, grid.cdf
    out = []
    n = len(lam)
    for i in range(n):
        j_hi = min(i + k, n - 1)
        j_lo = max(i - k, 0)
        d = 0.0 if j_hi == j_lo else (cdf[j_hi] - cdf[j_lo]) / (step * (j_hi - j_lo))
        out.append((float(lam[i]), float(d)))
    return out


# ---------------------------------------------------------------------------
# Euler-product identities (numeric cross-checks)
# ---------------------------------------------------------------------------


def identity_rad_euler(s: float, M: int = 10**5, P: int = 10**5):
    """Both sides of sum_m m^-s prod_{p|m} 3/p = prod_p (1 + 3/(p(p^s - 1))).

    Desk check restricted to s > 1 so both tails are controlled:
    lhs tail <= (3/2) M^(1-s)/(s-1), rhs log-tail <= 3 P^(-s) * P/(P-1).
    Returns (lhs, rhs, tail_budget).
    """
    if s <= 1:
        raise ValueError("desk check requires s > 1")
    f = _rad_weight_sieve(M)
    m = np.arange(1, M + 1, dtype=float)
    lhs = float(np.sum(f[1:] * m**-s))
    rhs = 1.0
    for p in sieve_primes(P):
        rhs *= 1.0 + 3.0 / (p * (p**s - 1))
    lhs_tail = 1.5 * M ** (1 - s) / (s - 1)
    rhs_tail = rhs * (math.exp(3.0 * P ** (-s)) - 1.0) + 1e-12
    return lhs, rhs, lhs_tail + rhs_tail


def euler_ratio_check(q: int) -> float:
    """Finite product prod_{5<=p<q} (1-p^-2)/(1-p^-10) over its limit.

    The limit is [(1-2^-10)(1-3^-10) / ((1-2^-2)(1-3^-2))] zeta(10)/zeta(2),
    written with the closed forms zeta(2) = pi^2/6, zeta(10) = pi^10/93555.
    """
    if q <= 5:
        raise ValueError("need q > 5")
    prod = 1.0
    for p in sieve_primes(q - 1):
        if p >= 5:
            prod *= (1 - p**-2) / (1 - p**-10)
    zeta2 = math.pi**2 / 6
    zeta10 = math.pi**10 / 93555
    limit = ((1 - 2**-10) * (1 - 3**-10) / ((1 - 2**-2) * (1 - 3**-2))) * zeta10 / zeta2
    return prod / limit
