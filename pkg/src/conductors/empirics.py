"""Finite-height experiments: enumerate a family, compute every
conductor, and compare the resulting statistics (CDF of N/H, mass
histogram of |disc|/N, counting-function growth) with the analytic
predictions.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np

from .family import CurveParams, FamilySpec, enumerate_family
from .reduction import CurveInvariants, conductor
from .theory import DistributionGrid, mass, theory_grid


@dataclass(frozen=True)
class ConductorRecord:
    a: int
    b: int
    delta: int
    conductor: int

    @property
    def ratio(self) -> int:
        return abs(self.delta) // self.conductor


def conductor_records(spec: FamilySpec, threads: int = 1,
                      oracle: bool = False) -> list[ConductorRecord]:
    """Every family member with its conductor, in (b, a) order for threads=1."""
    out: list[ConductorRecord] = []
    lock = threading.Lock()

    def visit(params: CurveParams) -> None:
        inv = conductor(params, oracle=oracle)
        rec = ConductorRecord(params.a, params.b, inv.delta.value, inv.conductor)
        with lock:
            out.append(rec)

    enumerate_family(spec, visit, threads=threads)
    if threads > 1:
        out.sort(key=lambda r: (r.b, r.a))
    return out


def empirical_cdf(records: list[ConductorRecord], height: float,
                  lambdas) -> DistributionGrid:
    """Fraction of records with N / height < lambda, per grid point."""
    if not records:
        raise ValueError("no records")
    scaled = np.sort(np.array([r.conductor for r in records], dtype=float) / height)
    lambdas = np.asarray(lambdas, dtype=float)
    counts = np.searchsorted(scaled, lambdas, side="left")
    return DistributionGrid(lambdas, counts / len(records), "empirical",
                            {"height": height, "n": len(records)})


def count_conductor_below(records: list[ConductorRecord], X: float) -> int:
    """#{records : N < X}."""
    return sum(1 for r in records if r.conductor < X)


def mass_histogram(records: list[ConductorRecord], m_max: int):
    """Relative frequency of |disc|/N = m for m <= m_max.

    Returns (freqs, overflow): freqs maps each m in 1..m_max to its
    frequency, overflow is the total frequency of ratios beyond m_max.
    """
    if not records:
        raise ValueError("no records")
    n = len(records)
    freqs = {m: 0 for m in range(1, m_max + 1)}
    over = 0
    for r in records:
        m = r.ratio
        if m <= m_max:
            freqs[m] += 1
        else:
            over += 1
    return {m: c / n for m, c in freqs.items()}, over / n


def power_law_fit(xs, ys) -> float:
    """Least-squares slope of log ys against log xs."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or len(xs) < 2:
        raise ValueError("need two or more (x, y) points")
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise ValueError("power-law fit needs positive data")
    slope, _ = np.polyfit(np.log(xs), np.log(ys), 1)
    return float(slope)


def sup_distance(g1: DistributionGrid, g2: DistributionGrid) -> float:
    """max_i |cdf1(lambda_i) - cdf2(lambda_i)| over a shared grid."""
    if not np.allclose(g1.lambdas, g2.lambdas):
        raise ValueError("grids must share their lambda points")
    return float(np.max(np.abs(g1.cdf - g2.cdf)))


@dataclass
class ComparisonReport:
    spec: FamilySpec
    lambdas: np.ndarray
    empirical: DistributionGrid
    theory: DistributionGrid
    sup_dist: float
    mass_empirical: dict[int, float]
    mass_overflow: float
    mass_theory: dict[int, float]
    n_curves: int
    meta: dict = field(default_factory=dict)


def compare(spec: FamilySpec, lambdas, m_max: int = 30,
            threads: int = 1) -> ComparisonReport:
    """End-to-end comparison at one height: CDFs, sup distance, masses."""
    records = conductor_records(spec, threads=threads)
    emp = empirical_cdf(records, spec.height, lambdas)
    theo = theory_grid(np.asarray(lambdas, dtype=float))
    freqs, over = mass_histogram(records, m_max)
    return ComparisonReport(
        spec=spec,
        lambdas=np.asarray(lambdas, dtype=float),
        empirical=emp,
        theory=theo,
        sup_dist=sup_distance(emp, theo),
        mass_empirical=freqs,
        mass_overflow=over,
        mass_theory={m: mass(m) for m in range(1, m_max + 1)},
        n_curves=len(records),
    )


# ---------------------------------------------------------------------------
# Residue-class census of reduction types at a single prime
# ---------------------------------------------------------------------------


def _valuation_grid(x: np.ndarray, p: int, cap: int) -> np.ndarray:
    """Elementwise min(v_p(x), cap); x must be nonzero."""
    v = np.zeros(x.shape, dtype=np.int64)
    y = x.copy()
    for _ in range(cap):
        div = y % p == 0
        if not div.any():
            break
        v[div] += 1
        y[div] //= p
    return v


def _classify_grid(a: np.ndarray, b: np.ndarray, p: int, vcap: int) -> np.ndarray:
    """Vectorized p >= 5 classifier; returns kind*100 + n codes, -1 unknown.

    Kind codes: 0 I (0 = good, n > 0 multiplicative), 2 II, 3 III,
    4 IV, 10 I_n*, 12 IV*, 13 III*, 14 II*.
    """
    disc = -16 * (4 * a**3 + 27 * b**2)
    vd = _valuation_grid(disc, p, vcap)
    va = _valuation_grid(np.where(a == 0, 1, a), p, vcap)
    va[a == 0] = vcap
    code = np.full(a.shape, -1, dtype=np.int64)
    mult = (vd > 0) & (va == 0)
    code[vd == 0] = 0
    code[mult] = vd[mult]
    add = (vd > 0) & (va > 0)
    code[add & (vd == 2)] = 200
    code[add & (vd == 3)] = 300
    code[add & (vd == 4)] = 400
    star0 = add & (vd == 6) & (va >= 2)
    code[star0] = 1000
    starn = add & (vd > 6) & (va == 2)
    code[starn] = 1000 + (vd[starn] - 6)
    free = code == -1
    code[free & add & (vd == 8)] = 1200
    free = code == -1
    code[free & add & (vd == 9)] = 1300
    free = code == -1
    code[free & add & (vd == 10)] = 1400
    return code


def _code_label(code: int) -> str:
    kind, n = divmod(int(code), 100)
    names = {0: "I", 2: "II", 3: "III", 4: "IV",
             10: "I*", 12: "IV*", 13: "III*", 14: "II*"}
    k = names[kind]
    if k == "I":
        return f"I{n}"
    if k == "I*":
        return f"I{n}*"
    return k


def reduction_type_census(p: int, eta: int, seed: int = 0,
                          chunk: int = 1 << 20) -> dict[str, int]:
    """Count residue classes (a, b) mod p^eta whose reduction type at p
    is pinned down at that modulus.

    Each class is tested on two random lifts one digit higher (digits
    drawn from 1..p-1, so lifts are nonzero and minimal at p); a class
    is credited to a type only when both lifts classify identically and
    decisively. Intended for p in {5, 7} and eta <= 4, where the known
    local densities can be checked exactly.
    """
    if p < 5:
        raise ValueError("census handles p >= 5 only")
    mod = p**eta
    rng = np.random.default_rng(seed)
    counts: dict[str, int] = {}
    res = np.arange(mod, dtype=np.int64)
    aa, bb = np.meshgrid(res, res, indexing="ij")
    aa, bb = aa.ravel(), bb.ravel()
    vcap = 3 * (eta + 1) + 5  # v_p(disc) of any lift is below this
    for i in range(0, len(aa), chunk):
        a0, b0 = aa[i : i + chunk], bb[i : i + chunk]
        labels = None
        agree = None
        for _ in range(2):
            ka = rng.integers(1, p, size=a0.shape, dtype=np.int64)
            kb = rng.integers(1, p, size=b0.shape, dtype=np.int64)
            c = _classify_grid(a0 + mod * ka, b0 + mod * kb, p, vcap)
            if labels is None:
                labels, agree = c, c >= 0
            else:
                agree &= (c == labels) & (c >= 0)
        for code in np.unique(labels[agree]):
            lbl = _code_label(code)
            counts[lbl] = counts.get(lbl, 0) + int(np.sum(agree & (labels == code)))
    return counts
