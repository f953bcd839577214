"""Reduction types, conductor exponents, and v_p(disc/N) at every prime.

Two routes are provided for every prime: a fast table/valuation
classifier, and a full run of Tate's algorithm (the slow reference
path). They are cross-validated against each other in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

from .family import CurveParams, FamilySpec, discriminant
from .intkernel import FactoredInteger, factor, valuation


@dataclass(frozen=True)
class ReductionType:
    """Kodaira symbol: kind in {I, II, III, IV, I*, IV*, III*, II*},
    with n the index for I_n and I_n* (0 otherwise)."""

    kind: str
    n: int = 0

    def __post_init__(self):
        if self.kind not in ("I", "II", "III", "IV", "I*", "IV*", "III*", "II*"):
            raise ValueError(f"unknown Kodaira kind {self.kind!r}")
        if self.n < 0 or (self.n and self.kind not in ("I", "I*")):
            raise ValueError("index n only applies to I_n and I_n*")

    def __str__(self):
        if self.kind == "I":
            return f"I{self.n}"
        if self.kind == "I*":
            return f"I{self.n}*"
        return self.kind

    @property
    def is_good(self) -> bool:
        return self.kind == "I" and self.n == 0

    @property
    def is_multiplicative(self) -> bool:
        return self.kind == "I" and self.n > 0


GOOD = ReductionType("I", 0)


@dataclass(frozen=True)
class LocalInvariants:
    """Per-prime record: type, v_p(disc), conductor exponent, v_p(disc/N)."""

    p: int
    type: ReductionType
    v_delta: int
    f: int

    def __post_init__(self):
        if self.v_delta - self.f < 0:
            raise ValueError("conductor exponent exceeds v_p(disc)")

    @property
    def v_ratio(self) -> int:
        return self.v_delta - self.f


@dataclass(frozen=True)
class CurveInvariants:
    delta: FactoredInteger
    conductor: int
    locals: tuple[LocalInvariants, ...]

    @property
    def ratio(self) -> int:
        """|disc| / N, always a positive integer."""
        return abs(self.delta.value) // self.conductor


# Reduction type at p = 2 keyed by (t mod 6, a mod 12, b mod 12), for the
# r = 1 and r = 2 column blocks.  r = 5 reuses the r = 1 block with the
# a-entries translated by 4 (entry a=1 serves a=5, a=7 serves a=11), and
# r = 4 reuses the r = 2 block translated by 8.
_TABLE2 = {
    (1, 1, 1): "II", (1, 1, 7): "III", (1, 7, 1): "IV", (1, 7, 7): "II",
    (3, 1, 3): "III", (3, 1, 9): "II", (3, 7, 3): "II", (3, 7, 9): "IV",
    (5, 1, 5): "II", (5, 1, 11): "III", (5, 7, 5): "IV", (5, 7, 11): "II",
    (1, 2, 1): "III", (1, 2, 7): "II", (1, 8, 1): "IV", (1, 8, 7): "II",
    (3, 2, 3): "II", (3, 2, 9): "III", (3, 8, 3): "II", (3, 8, 9): "IV",
    (5, 2, 5): "III", (5, 2, 11): "II", (5, 8, 5): "IV", (5, 8, 11): "II",
}

# Conductor exponent at 2 by type; forced by Ogg's formula with
# v_2(disc) = 4 and component counts 1, 2, 3.
_F_AT_2 = {"II": 4, "III": 3, "IV": 2}


def reduction_at_2(a: int, b: int, spec: FamilySpec) -> LocalInvariants:
    """Type at p = 2 from the (a, b) mod 12 table; v_2(disc) = 4 always."""
    if a % 6 != spec.r or b % 6 != spec.t:
        raise ValueError("(a, b) does not satisfy the family congruences")
    shift = {1: 0, 2: 0, 5: 4, 4: 8}[spec.r]
    key = (spec.t, (a - shift) % 12, b % 12)
    kind = _TABLE2[key]
    f = _F_AT_2[kind]
    return LocalInvariants(2, ReductionType(kind), 4, f)


def reduction_at_3(a: int, b: int, spec: FamilySpec) -> LocalInvariants:
    """Good reduction at 3 for every family member (3 does not divide a)."""
    if a % 3 == 0:
        raise ValueError("3 | a puts the curve outside the family")
    v3 = valuation(discriminant(a, b), 3)
    if v3 != 0:
        raise ArithmeticError("3 | disc contradicts good reduction at 3")
    return LocalInvariants(3, GOOD, 0, 0)


def reduction_at_p(a: int, b: int, p: int) -> LocalInvariants:
    """Fast classifier for p >= 5 on a model minimal at p.

    Multiplicative types read off v_p(disc) directly; additive types use
    the standard (v_p(c4), v_p(disc)) table with c4 = -48a.
    """
    if p < 5:
        raise ValueError("reduction_at_p handles p >= 5 only")
    delta = discriminant(a, b)
    if delta == 0:
        raise ValueError("singular curve")
    vd = valuation(delta, p)
    if vd == 0:
        return LocalInvariants(p, GOOD, 0, 0)
    if a % p != 0:
        return LocalInvariants(p, ReductionType("I", vd), vd, 1)
    va = valuation(a, p)
    if vd == 2:
        t = ReductionType("II")
    elif vd == 3:
        t = ReductionType("III")
    elif vd == 4:
        t = ReductionType("IV")
    elif vd == 6 and va >= 2:
        t = ReductionType("I*", 0)
    elif vd > 6 and va == 2:
        t = ReductionType("I*", vd - 6)
    elif vd == 8:
        t = ReductionType("IV*")
    elif vd == 9:
        t = ReductionType("III*")
    elif vd == 10:
        t = ReductionType("II*")
    else:
        raise ArithmeticError(
            f"no additive type for p={p}, v(disc)={vd}, v(a)={va}; "
            "model non-minimal at p or classifier bug"
        )
    return LocalInvariants(p, t, vd, 2)


# ---------------------------------------------------------------------------
# Tate's algorithm (reference path)
# ---------------------------------------------------------------------------


def _b_invariants(a1, a2, a3, a4, a6):
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def _model_discriminant(a1, a2, a3, a4, a6):
    b2, b4, b6, b8 = _b_invariants(a1, a2, a3, a4, a6)
    return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def _translate(coeffs, r, t):
    """x -> x + r, y -> y + t (no shear); returns new a-invariants."""
    a1, a2, a3, a4, a6 = coeffs
    return (
        a1,
        a2 + 3 * r,
        a3 + r * a1 + 2 * t,
        a4 + 2 * r * a2 - t * a1 + 3 * r * r,
        a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1,
    )


def _singular_point(coeffs, p):
    """The unique singular point of the reduction mod p (additive case)."""
    a1, a2, a3, a4, a6 = coeffs
    if p <= 3:
        for x0 in range(p):
            for y0 in range(p):
                on = (y0 * y0 + a1 * x0 * y0 + a3 * y0
                      - x0**3 - a2 * x0 * x0 - a4 * x0 - a6) % p == 0
                dx = (a1 * y0 - 3 * x0 * x0 - 2 * a2 * x0 - a4) % p == 0
                dy = (2 * y0 + a1 * x0 + a3) % p == 0
                if on and dx and dy:
                    return x0, y0
        raise ArithmeticError("no singular point found mod p")
    b2, _, _, _ = _b_invariants(*coeffs)
    x0 = (-b2 * pow(12, -1, p)) % p
    y0 = (-(a1 * x0 + a3) * pow(2, -1, p)) % p
    return x0, y0


def _cubic_repeated_root(A, B, C, p):
    """Root structure of T^3 + A T^2 + B T + C over F_p.

    Returns ("distinct", None), ("double", r), or ("triple", r).
    """
    A, B, C = A % p, B % p, C % p
    if p <= 3:
        roots = [x for x in range(p) if (x**3 + A * x * x + B * x + C) % p == 0]
        for r in roots:
            # multiplicity via derivative / second derivative
            d1 = (3 * r * r + 2 * A * r + B) % p == 0
            d2 = (6 * r + 2 * A) % p == 0
            poly_is_cube = (A - (-3 * r)) % p == 0 and (B - 3 * r * r) % p == 0 and (C + r**3) % p == 0
            if d1 and poly_is_cube:
                return "triple", r
            if d1:
                return "double", r
        return "distinct", None
    disc = (18 * A * B * C - 4 * A**3 * C + A * A * B * B - 4 * B**3 - 27 * C * C) % p
    if disc != 0:
        return "distinct", None
    inv3 = pow(3, -1, p)
    r = (-A * inv3) % p
    if (B - 3 * r * r) % p == 0 and (C + r**3) % p == 0:
        return "triple", r
    # double root solves the derivative 3T^2 + 2AT + B
    d = (A * A - 3 * B) % p
    s = _sqrt_mod(d, p)
    if s is None:
        raise ArithmeticError("repeated root expected but derivative has no root")
    for cand in ((-A + s) * inv3 % p, (-A - s) * inv3 % p):
        if (cand**3 + A * cand * cand + B * cand + C) % p == 0:
            return "double", cand
    raise ArithmeticError("repeated root not found")


def _sqrt_mod(a, p):
    """A square root of a mod p, or None (Tonelli-Shanks; p odd prime)."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def tate_oracle(a: int, b: int, p: int) -> LocalInvariants:
    """Full Tate's algorithm on y^2 = x^3 + ax + b at p.

    Reference path for all primes. Conductor exponents follow Ogg's
    formula through the per-step component counts. Raises if the model
    is non-minimal at p, or for additive reduction at 2 deeper than
    type IV (outside this artifact's family and scope).
    """
    coeffs = (0, 0, 0, a, b)
    delta = _model_discriminant(*coeffs)
    if delta == 0:
        raise ValueError("singular curve")
    n = valuation(delta, p)
    if n == 0:
        return LocalInvariants(p, GOOD, 0, 0)

    b2, b4, _, _ = _b_invariants(*coeffs)
    c4 = b2 * b2 - 24 * b4
    if c4 % p != 0:
        return LocalInvariants(p, ReductionType("I", n), n, 1)

    # Additive: move the singular point to (0, 0).
    x0, y0 = _singular_point(coeffs, p)
    coeffs = _translate(coeffs, x0, y0)
    a1, a2, a3, a4, a6 = coeffs
    if a3 % p or a4 % p or a6 % p:
        raise ArithmeticError("translation failed to center the singular point")

    p2, p3 = p * p, p**3
    if a6 % p2 != 0:
        return LocalInvariants(p, ReductionType("II"), n, n)
    _, _, b6, b8 = _b_invariants(*coeffs)
    if b8 % p3 != 0:
        return LocalInvariants(p, ReductionType("III"), n, n - 1)
    if b6 % p3 != 0:
        return LocalInvariants(p, ReductionType("IV"), n, n - 2)

    if p == 2:
        raise ValueError("additive reduction at 2 beyond type IV is unsupported")

    # Normalize to v(a3) >= 2 (y-translation; p odd, a1 = 0 throughout).
    inv2 = pow(2, -1, p)
    t = p * ((-(a3 // p) * inv2) % p)
    coeffs = _translate(coeffs, 0, t)
    a1, a2, a3, a4, a6 = coeffs
    if a2 % p or a3 % p2 or a4 % p2 or a6 % p3:
        raise ArithmeticError("step 6 valuations violated")

    kind, root = _cubic_repeated_root(a2 // p, a4 // p2, a6 // p3, p)
    if kind == "distinct":
        return LocalInvariants(p, ReductionType("I*", 0), n, n - 4)

    coeffs = _translate(coeffs, p * root, 0)
    a1, a2, a3, a4, a6 = coeffs

    if kind == "double":
        # I_nu* subprocedure: alternate y- and x-quadratics.
        nu, q = 1, 2
        while True:
            pq, p2q = p**q, p ** (2 * q)
            a3q, a62q = a3 // pq, a6 // p2q
            if (a3q * a3q + 4 * a62q) % p != 0:
                return LocalInvariants(p, ReductionType("I*", nu), n, n - 4 - nu)
            t = pq * ((-a3q * inv2) % p)
            coeffs = _translate(coeffs, 0, t)
            a1, a2, a3, a4, a6 = coeffs
            nu += 1
            a21 = a2 // p
            a4q, a6q = a4 // (pq * p), a6 // (p2q * p)
            if (a4q * a4q - 4 * a21 * a6q) % p != 0:
                return LocalInvariants(p, ReductionType("I*", nu), n, n - 4 - nu)
            r = pq * ((-a4q * pow(2 * a21, -1, p)) % p)
            coeffs = _translate(coeffs, r, 0)
            a1, a2, a3, a4, a6 = coeffs
            nu += 1
            q += 1

    # Triple root: steps 8-10.
    a32, a64 = a3 // p2, a6 // p**4
    if (a32 * a32 + 4 * a64) % p != 0:
        return LocalInvariants(p, ReductionType("IV*"), n, n - 6)
    t = p2 * ((-a32 * inv2) % p)
    coeffs = _translate(coeffs, 0, t)
    a1, a2, a3, a4, a6 = coeffs
    if a4 % p**4 != 0:
        return LocalInvariants(p, ReductionType("III*"), n, n - 7)
    if a6 % p**6 != 0:
        return LocalInvariants(p, ReductionType("II*"), n, n - 8)
    raise ValueError(f"model non-minimal at {p}")


def local_invariants(a: int, b: int, p: int, spec: FamilySpec) -> LocalInvariants:
    """Fast-path dispatch by prime."""
    if p == 2:
        return reduction_at_2(a, b, spec)
    if p == 3:
        return reduction_at_3(a, b, spec)
    return reduction_at_p(a, b, p)


def conductor(params: CurveParams, oracle: bool = False) -> CurveInvariants:
    """Factor the discriminant and assemble N = prod p^f_p.

    ``oracle=True`` routes every prime through Tate's algorithm instead
    of the fast tables.
    """
    a, b, spec = params.a, params.b, params.spec
    delta = factor(discriminant(a, b))
    locs = []
    N = 1
    for p, e in delta.factors:
        if p == 3:
            raise ArithmeticError("3 | disc contradicts good reduction at 3")
        li = tate_oracle(a, b, p) if oracle else local_invariants(a, b, p, spec)
        if li.v_delta != e:
            raise ArithmeticError(f"v_{p}(disc) mismatch: {li.v_delta} vs {e}")
        locs.append(li)
        N *= p**li.f
    return CurveInvariants(delta, N, tuple(locs))
