"""Exact integer arithmetic shared by every other module.

Factorization (trial division + Brent's rho), p-adic valuations, the
Moebius function, and real zeta values with Euler factors removed.
All functions here are pure and safe to call from multiple threads.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DEFAULT_TRIAL_BOUND = 10**6

# Witnesses proving primality for every n < 3.3 * 10**24 (Sorenson & Webster).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def sieve_primes(limit: int) -> list[int]:
    """All primes <= limit, by a plain sieve of Eratosthenes."""
    if limit < 2:
        return []
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).tolist()


_SMALL_PRIMES = sieve_primes(10_000)
_SMALL_PRIME_SET = frozenset(_SMALL_PRIMES)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24."""
    if n < 2:
        return False
    if n < 10_000:
        return n in _SMALL_PRIME_SET
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int, rng: random.Random) -> int:
    """A nontrivial factor of composite n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


@dataclass(frozen=True)
class FactoredInteger:
    """A nonzero integer together with the factorization of its absolute value.

    ``factors`` is sorted by prime and every exponent is >= 1;
    the product of the prime powers recomposes ``abs(value)``.
    """

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.value == 0:
            raise ValueError("factorization of 0 is undefined")
        acc = 1
        last = 1
        for p, e in self.factors:
            if e < 1 or p <= last:
                raise ValueError("factors must be sorted with exponents >= 1")
            last = p
            acc *= p**e
        if acc != abs(self.value):
            raise ValueError("factors do not recompose value")

    @property
    def prime_support(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def factor(n: int, trial_bound: int = DEFAULT_TRIAL_BOUND, seed: int = 0) -> FactoredInteger:
    """Canonical factorization of n != 0, sign preserved in ``value``.

    Trial division by small primes, then deterministic primality tests
    with Brent's rho for composite cofactors. ``trial_bound`` caps the
    trial-division stage; rho handles whatever survives it.
    """
    if n == 0:
        raise ValueError("factorization of 0 is undefined")
    m = abs(n)
    exps: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p > trial_bound or p * p > m:
            break
        while m % p == 0:
            exps[p] = exps.get(p, 0) + 1
            m //= p
    if m > 1:
        rng = random.Random(seed ^ (n & 0xFFFFFFFF))
        stack = [m]
        while stack:
            q = stack.pop()
            if q == 1:
                continue
            if is_prime(q):
                exps[q] = exps.get(q, 0) + 1
                continue
            root = math.isqrt(q)
            if root * root == q:
                stack += [root, root]
                continue
            d = _brent_rho(q, rng)
            stack += [d, q // d]
    return FactoredInteger(n, tuple(sorted(exps.items())))


def _require_prime(p: int) -> None:
    if p < 10_000:
        if p not in _SMALL_PRIME_SET:
            raise ValueError(f"{p} is not prime")
    elif not is_prime(p):
        raise ValueError(f"{p} is not prime")


def valuation(n: int, p: int) -> int:
    """Largest k with p**k | n, for n != 0 and p prime."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    _require_prime(p)
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def p_part(n: int, p: int) -> int:
    """gcd(|n|, p^infinity) = p**valuation(n, p)."""
    return p ** valuation(n, p)


def moebius(d: int) -> int:
    """Moebius function mu(d), d >= 1."""
    if d < 1:
        raise ValueError("moebius requires d >= 1")
    if d == 1:
        return 1
    f = factor(d)
    if any(e > 1 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def moebius_sieve(limit: int) -> np.ndarray:
    """Array mu[0..limit] of Moebius values (mu[0] unused, set to 0)."""
    mu = np.ones(limit + 1, dtype=np.int64)
    mu[0] = 0
    for p in sieve_primes(limit):
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    return mu


@lru_cache(maxsize=256)
def zeta_real(s: float, tol: float = 1e-14) -> float:
    """zeta(s) for real s > 1, absolute error < tol.

    Direct summation to T with the exact integral tail
    int_{T+1/2}^inf x^-s dx added back; the midpoint choice leaves a
    remainder well below T**-s, and T is picked so T**-s < tol/2.
    """
    if s <= 1:
        raise ValueError("zeta_real requires s > 1")
    T = max(64, math.ceil((2.0 / tol) ** (1.0 / s)))
    n = np.arange(1, T + 1, dtype=np.float64)
    head = float(np.sum(n**-s))
    tail = (T + 0.5) ** (1.0 - s) / (s - 1.0)
    return head + tail


def zeta_primes_removed(s: float, m: int, tol: float = 1e-14) -> float:
    """zeta(s) with Euler factors at primes dividing m removed."""
    if s <= 1:
        raise ValueError("zeta_primes_removed requires s > 1")
    if m < 1:
        raise ValueError("m must be a positive integer")
    if tol <= 0:
        raise ValueError("tol must be positive")
    z = zeta_real(s, tol)
    for p in factor(m).prime_support:
        z *= 1.0 - p ** (-s)
    return z
