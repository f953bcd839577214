"""The height-ordered curve family: membership, enumeration, counting oracles.

A family is cut out of the (a, b) box |a| <= H^(1/3), |b| <= H^(1/2) by
two congruences mod 6 and the minimality condition
"p^4 | a implies p^6 does not divide b".
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

import numpy as np

from .intkernel import factor, moebius_sieve


def integer_root(n: int, k: int) -> int:
    """floor(n ** (1/k)) computed exactly for n >= 0."""
    if n < 0:
        raise ValueError("integer_root requires n >= 0")
    if n == 0:
        return 0
    r = int(round(n ** (1.0 / k)))
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def discriminant(a: int, b: int) -> int:
    """Discriminant of y^2 = x^3 + ax + b."""
    return -16 * (4 * a**3 + 27 * b**2)


@dataclass(frozen=True)
class FamilySpec:
    """Height bound with the residue pair (r mod 6, t mod 6), 3 not | r, 2 not | t."""

    height: float
    r: int
    t: int

    def __post_init__(self):
        object.__setattr__(self, "r", self.r % 6)
        object.__setattr__(self, "t", self.t % 6)
        if self.height < 1:
            raise ValueError("height must be >= 1")
        if self.r % 3 == 0:
            raise ValueError("r must not be divisible by 3")
        if self.t % 2 == 0:
            raise ValueError("t must be odd")

    @property
    def a_bound(self) -> int:
        return integer_root(math.floor(self.height), 3)

    @property
    def b_bound(self) -> int:
        return integer_root(math.floor(self.height), 2)


@dataclass(frozen=True)
class CurveParams:
    a: int
    b: int
    spec: FamilySpec


def _fourth_power_primes(a: int) -> tuple[int, ...]:
    """Primes p with p^4 | a (a != 0)."""
    if a == 0:
        raise ValueError("a = 0 has every prime to the fourth as a divisor")
    return tuple(p for p, e in factor(a).factors if e >= 4)


def _is_sixth_power_free(b: int) -> bool:
    if b == 0:
        return False
    return all(e < 6 for _, e in factor(b).factors)


def is_minimal_pair(a: int, b: int) -> bool:
    """True iff no prime p has p^4 | a and p^6 | b."""
    if a == 0:
        return _is_sixth_power_free(b)
    if b == 0:
        return not _fourth_power_primes(a)
    for p in _fourth_power_primes(a):
        if b % p**6 == 0:
            return False
    return True


def is_member(spec: FamilySpec, a: int, b: int) -> bool:
    """All five membership conditions, plus discriminant != 0."""
    if abs(a) > spec.a_bound or abs(b) > spec.b_bound:
        return False
    if a % 6 != spec.r or b % 6 != spec.t:
        return False
    if 4 * a**3 + 27 * b**2 == 0:
        return False
    return is_minimal_pair(a, b)


def _residues(low: int, high: int, r: int, mod: int = 6) -> range:
    first = low + (r - low) % mod
    return range(first, high + 1, mod)


@dataclass(frozen=True)
class Shard:
    """A contiguous b-range; visitation order inside a shard is (b, a) lex."""

    b_lo: int
    b_hi: int


def shard_plan(spec: FamilySpec, shards: int) -> list[Shard]:
    B = spec.b_bound
    if shards < 1:
        raise ValueError("need at least one shard")
    edges = np.linspace(-B, B + 1, shards + 1).astype(int)
    return [Shard(int(lo), int(hi - 1)) for lo, hi in zip(edges[:-1], edges[1:]) if hi > lo]


def _enumerate_shard(spec: FamilySpec, shard: Shard,
                     visitor: Callable[[CurveParams], None] | None) -> int:
    A = spec.a_bound
    # p^4 | a happens only for p <= A^(1/4); cache the p^6 moduli per |a|.
    p6_by_abs: dict[int, tuple[int, ...]] = {
        a: tuple(p**6 for p in _fourth_power_primes(a)) for a in range(1, A + 1)
    }
    count = 0
    a_vals = list(_residues(-A, A, spec.r))
    for b in _residues(max(shard.b_lo, -spec.b_bound), min(shard.b_hi, spec.b_bound), spec.t):
        for a in a_vals:
            if a == 0:
                if not _is_sixth_power_free(b):
                    continue
            else:
                p6s = p6_by_abs[abs(a)]
                if p6s and any(b % q == 0 for q in p6s):
                    continue
            # b is odd here, so 4a^3 + 27b^2 is odd and the discriminant
            # is automatically nonzero.
            count += 1
            if visitor is not None:
                visitor(CurveParams(a, b, spec))
    return count


def enumerate_family(spec: FamilySpec,
                     visitor: Callable[[CurveParams], None] | None = None,
                     threads: int = 1) -> int:
    """Visit every family member once; returns the member count.

    With threads > 1 the visitor may be invoked concurrently from
    worker threads, one shard per worker; it must be thread-safe and
    any aggregation associative-commutative. threads == 1 is the
    sequential golden path with global (b, a) lexicographic order.
    """
    if threads <= 1:
        return _enumerate_shard(spec, Shard(-spec.b_bound, spec.b_bound), visitor)
    plan = shard_plan(spec, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_enumerate_shard, spec, s, visitor) for s in plan]
        return sum(f.result() for f in futures)


def iter_family(spec: FamilySpec) -> Iterator[CurveParams]:
    """Sequential generator over the family in (b, a) lexicographic order."""
    A = spec.a_bound
    for b in _residues(-spec.b_bound, spec.b_bound, spec.t):
        for a in _residues(-A, A, spec.r):
            if is_member(spec, a, b):
                yield CurveParams(a, b, spec)


def moebius_sieve_count(spec: FamilySpec) -> int:
    """Independent family count via the d^4 | a, d^6 | b Moebius sieve.

    Counts sum_d mu(d) #{(alpha, beta) : |alpha d^4| <= H^(1/3),
    |beta d^6| <= H^(1/2), congruences mod 6}, an exact identity with
    the direct enumeration (b odd rules out discriminant zero).
    """
    A, B = spec.a_bound, spec.b_bound
    dmax = integer_root(math.floor(spec.height), 12) + 1
    mu = moebius_sieve(dmax)
    total = 0
    for d in range(1, dmax + 1):
        if mu[d] == 0 or math.gcd(d, 6) != 1:
            continue
        d4, d6 = d**4, d**6
        n_a = sum(1 for alpha in _residues(-(A // d4), A // d4, 0, 1)
                  if (alpha * d4) % 6 == spec.r)
        n_b = sum(1 for beta in _residues(-(B // d6), B // d6, 0, 1)
                  if (beta * d6) % 6 == spec.t)
        total += int(mu[d]) * n_a * n_b
    return total


def count_disc_window(H: float, Q: int, members: Iterable[tuple[int, int]] | None,
                      lam0: float, lam1: float) -> int:
    """Exact count of pairs |a| < H^(1/3), |b| < H^(1/2) with
    (a mod Q, b mod Q) in the residue set and lam0 < disc/H < lam1.

    Test-support oracle: direct enumeration over the whole box, strict
    bounds throughout. ``members=None`` means all residues allowed.
    """
    if not lam0 < lam1:
        raise ValueError("need lam0 < lam1")
    if Q < 1:
        raise ValueError("Q must be >= 1")
    A = integer_root(math.floor(H), 3)
    B = integer_root(math.floor(H), 2)
    if A**3 == math.floor(H) == H:
        A -= 1  # strict bound |a| < H^(1/3)
    if B**2 == math.floor(H) == H:
        B -= 1
    allowed = np.zeros((Q, Q), dtype=bool)
    if members is None:
        allowed[:, :] = True
    else:
        for ra, rb in members:
            allowed[ra % Q, rb % Q] = True
    a = np.arange(-A, A + 1, dtype=np.int64)
    b = np.arange(-B, B + 1, dtype=np.int64)
    ok_cols = allowed[np.mod(a, Q)]  # shape (len(a), Q)
    b_res = np.mod(b, Q)
    total = 0
    # chunk over a to bound memory
    chunk = max(1, 10_000_000 // max(1, len(b)))
    delta_b = 27.0 * b.astype(np.float64) ** 2
    for i in range(0, len(a), chunk):
        aa = a[i : i + chunk]
        disc = -16.0 * (4.0 * aa.astype(np.float64)[:, None] ** 3 + delta_b[None, :])
        win = (disc / H > lam0) & (disc / H < lam1)
        memb = ok_cols[i : i + chunk][:, b_res]
        total += int(np.count_nonzero(win & memb))
    return total
