"""Residue-class machinery: the (Q, C) plans, the sets S_{Q,m} cut out by
gcd(|disc|/N, C) = m, exhaustive verification of their cardinalities, and
the no-d divisibility property.

The gcd condition is prime-local, so S_{Q,m} factors as a CRT product of
one component mod 12 and one mod p^(e+2) per 5 <= p < q. Exhaustive
scans of the full (Z/QZ)^2 stay feasible only for q = 7 (Q = 1500); the
factored form carries cardinalities and the no-d check to larger q.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import reduce

from .family import FamilySpec
from .intkernel import sieve_primes, valuation
from .reduction import reduction_at_2, reduction_at_p


@dataclass(frozen=True)
class QCPlan:
    q: int
    Q: int
    C: int

    @property
    def odd_primes(self) -> tuple[int, ...]:
        return tuple(p for p in sieve_primes(self.q - 1) if p >= 5)

    def exponent(self, p: int) -> int:
        """floor(log q / log p), computed exactly."""
        e = 0
        while p ** (e + 1) <= self.q:
            e += 1
        return e


def build_plan(q: int) -> QCPlan:
    """Q = 12 prod p^(e+2), C = 4 prod p^e over 5 <= p < q, e = floor(log q/log p)."""
    if q <= 5:
        raise ValueError("need q > 5")
    Q, C = 12, 4
    for p in sieve_primes(q - 1):
        if p < 5:
            continue
        e = 0
        while p ** (e + 1) <= q:
            e += 1
        Q *= p ** (e + 2)
        C *= p**e
    return QCPlan(q, Q, C)


@dataclass(frozen=True)
class ResidueSet:
    """Subset of (Z/QZ)^2 by explicit membership."""

    Q: int
    members: frozenset[tuple[int, int]]

    @property
    def cardinality(self) -> int:
        return len(self.members)

    def __contains__(self, pair) -> bool:
        a, b = pair
        return (a % self.Q, b % self.Q) in self.members


def _capped_v_ratio(a: int, b: int, p: int, cap: int, spec: FamilySpec) -> int:
    """min(v_p(disc/N), cap) for a lift, via the fast local tables."""
    if p == 2:
        return min(reduction_at_2(a, b, spec).v_ratio, cap)
    return min(reduction_at_p(a, b, p).v_ratio, cap)


def _gcd_ratio_with_C(a: int, b: int, plan: QCPlan, spec: FamilySpec,
                      rng: random.Random) -> int:
    """gcd(|disc|/N, C) for a random lift of (a, b) mod Q.

    The lift stays implicit in the residues: a is replaced by
    a + Q * k with k random, which leaves every class mod Q fixed.
    """
    for _ in range(16):
        ah = a + plan.Q * rng.randrange(1, 1000)
        bh = b + plan.Q * rng.randrange(1, 1000)
        try:
            g = 2 ** _capped_v_ratio(ah, bh, 2, 2, spec)
            for p in plan.odd_primes:
                g *= p ** _capped_v_ratio(ah, bh, p, plan.exponent(p), spec)
            return g
        except ArithmeticError:
            continue  # unlucky non-minimal lift; redraw
    raise ArithmeticError("no usable lift found")


def _minimality_mod_Q(a: int, b: int, plan: QCPlan) -> bool:
    """Condition: for p < q with p^6 | Q, not (p^4 | a and p^6 | b)."""
    for p in (2, 3, *plan.odd_primes):
        vq = valuation(plan.Q, p)
        if vq >= 6 and a % p**4 == 0 and b % p**6 == 0:
            return False
    return True


def build_SQm(plan: QCPlan, spec: FamilySpec, m: int, seed: int = 0) -> ResidueSet:
    """Exhaustive construction of S_{Q,m} over the full (Z/QZ)^2.

    Every candidate is evaluated through two independent random lifts;
    disagreement would contradict the determinacy of the gcd condition
    and raises. Feasible for q = 7 (Q = 1500); larger q should go
    through the factored route.
    """
    if plan.C % m != 0:
        raise ValueError(f"m = {m} does not divide C = {plan.C}")
    if plan.Q > 4000:
        raise ValueError("exhaustive scan limited to small Q; use factored form")
    rng = random.Random(seed)
    members = set()
    for a in range(spec.r, plan.Q, 6):
        for b in range(spec.t, plan.Q, 6):
            if not _minimality_mod_Q(a, b, plan):
                continue
            g1 = _gcd_ratio_with_C(a, b, plan, spec, rng)
            g2 = _gcd_ratio_with_C(a, b, plan, spec, rng)
            if g1 != g2:
                raise ArithmeticError(
                    f"lifts of ({a}, {b}) mod {plan.Q} disagree: {g1} vs {g2}"
                )
            if g1 == m:
                members.add((a, b))
    return ResidueSet(plan.Q, frozenset(members))


def no_d_violations(rset: ResidueSet, plan: QCPlan) -> frozenset:
    """Members (a, b) admitting d with gcd(d, Q) > 1,
    gcd(d^4, Q) | gcd(a, Q) and gcd(d^6, Q) | gcd(b, Q).

    It suffices to scan prime powers d = p^k with p | Q, since any
    witness d yields one supported at a single prime. The returned set
    is empty whenever v_p(m) < v_p(C) for every p >= 5; at a boundary
    valuation v_p(m) = v_p(C) it consists exactly of the classes with
    deep additive valuations (p^3 | a and p^3 | b when p^6 does not
    divide Q), which the gcd-with-C definition cannot exclude.
    """
    Q = plan.Q
    dps = []
    for p in (2, 3, *plan.odd_primes):
        k = 1
        while p**k <= Q:
            dps.append(p**k)
            k += 1
    bad = set()
    for a, b in rset.members:
        ga, gb = math.gcd(a, Q), math.gcd(b, Q)
        for d in dps:
            if ga % math.gcd(d**4, Q) == 0 and gb % math.gcd(d**6, Q) == 0:
                bad.add((a, b))
                break
    return frozenset(bad)


def verify_no_d_property(rset: ResidueSet, plan: QCPlan) -> bool:
    """True iff no member admits a witness d (see no_d_violations)."""
    return not no_d_violations(rset, plan)


def density_formula(plan: QCPlan, m: int) -> "Fraction":
    """Predicted #S_{Q,m} / Q^2 as an exact rational.

    (1/36) prod_{p < q} d_p(m), where d_p(m) is the local density
    rho(p, p^{v_p(m)}) when v_p(m) < v_p(C), and the complement
    1 - sum_{n < v_p(C)} rho(p, p^n) at the boundary valuation
    v_p(m) = v_p(C). The complement, not the rho-tail: the gcd with C
    caps the observable ratio, so boundary classes absorb every deeper
    valuation including the non-minimal locus of density p^-10 that
    rho excludes but a modulus with v_p(Q) < 6 cannot.
    """
    from fractions import Fraction

    from .theory import rho_pn

    if plan.C % m != 0:
        raise ValueError(f"m = {m} does not divide C = {plan.C}")
    d = Fraction(1, 36)
    for p in (2, 3, *plan.odd_primes):
        vC = valuation(plan.C, p) if plan.C % p == 0 else 0
        vm = valuation(m, p) if m % p == 0 else 0
        if vm < vC:
            d *= rho_pn(p, vm)
        else:
            d *= 1 - sum(rho_pn(p, n) for n in range(vC))
    return d


# ---------------------------------------------------------------------------
# Factored (CRT) form, for q beyond the exhaustive range
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FactoredSQm:
    """S_{Q,m} as a CRT product of local residue sets.

    ``local`` maps a modulus (12, or p^(e+2)) to the set of admissible
    (a, b) pairs mod that modulus; cardinality is the product.
    """

    plan: QCPlan
    m: int
    local: dict[int, frozenset[tuple[int, int]]]

    @property
    def cardinality(self) -> int:
        return reduce(lambda acc, s: acc * len(s), self.local.values(), 1)


def build_SQm_factored(plan: QCPlan, spec: FamilySpec, m: int, seed: int = 0) -> FactoredSQm:
    """Local-component construction of S_{Q,m}; scales to q = 11 and 13."""
    if plan.C % m != 0:
        raise ValueError(f"m = {m} does not divide C = {plan.C}")
    rng = random.Random(seed)
    local: dict[int, frozenset[tuple[int, int]]] = {}

    v2m = valuation(m, 2) if m % 2 == 0 else 0
    twelve = set()
    for a in range(spec.r, 12, 6):
        for b in range(spec.t, 12, 6):
            if reduction_at_2(a, b, spec).v_ratio == v2m:
                twelve.add((a, b))
    local[12] = frozenset(twelve)

    for p in plan.odd_primes:
        e = plan.exponent(p)
        mod = p ** (e + 2)
        vpm = valuation(m, p) if m % p == 0 else 0
        keep = set()
        for a in range(mod):
            for b in range(mod):
                if valuation(plan.Q, p) >= 6 and a % p**4 == 0 and b % p**6 == 0:
                    continue
                v1 = _local_v_ratio_capped(a, b, p, mod, e, rng)
                v2 = _local_v_ratio_capped(a, b, p, mod, e, rng)
                if v1 != v2:
                    raise ArithmeticError(f"lifts mod {mod} disagree at p = {p}")
                if v1 == vpm:
                    keep.add((a, b))
        local[mod] = frozenset(keep)
    return FactoredSQm(plan, m, local)


def _local_v_ratio_capped(a: int, b: int, p: int, mod: int, cap: int,
                          rng: random.Random) -> int:
    for _ in range(16):
        ah = a + mod * rng.randrange(1, 1000)
        bh = b + mod * rng.randrange(1, 1000)
        try:
            return min(reduction_at_p(ah, bh, p).v_ratio, cap)
        except ArithmeticError:
            continue
    raise ArithmeticError("no usable lift found")


def no_d_violations_factored(fset: FactoredSQm) -> dict[int, frozenset]:
    """Per-component no-d violations on the factored form.

    A witness d can be taken to be a prime power p^k, and its gcd
    conditions only involve a, b mod the p-component of Q, so each
    prime is checked against its local set alone. Maps component
    modulus to the offending local pairs (empty when clean).
    """
    Q = fset.plan.Q
    out: dict[int, frozenset] = {}
    for mod, pairs in fset.local.items():
        if mod == 12:
            primes = (2, 3)
        else:
            primes = (min(p for p in fset.plan.odd_primes if mod % p == 0),)
        bad = set()
        for p in primes:
            vq = valuation(Q, p)
            k = 1
            while p**k <= Q:
                need_a = min(4 * k, vq)
                need_b = min(6 * k, vq)
                for a, b in pairs:
                    va = min(valuation(a, p) if a else vq, vq)
                    vb = min(valuation(b, p) if b else vq, vq)
                    if va >= need_a and vb >= need_b:
                        bad.add((a, b))
                k += 1
        out[mod] = frozenset(bad)
    return out


def verify_no_d_property_factored(fset: FactoredSQm) -> bool:
    """True iff every component is free of no-d violations."""
    return not any(no_d_violations_factored(fset).values())
