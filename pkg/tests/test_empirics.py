import numpy as np
import pytest

from conductors.empirics import (
    ComparisonReport,
    ConductorRecord,
    compare,
    conductor_records,
    count_conductor_below,
    empirical_cdf,
    mass_histogram,
    power_law_fit,
    reduction_type_census,
    sup_distance,
)
from conductors.family import FamilySpec
from conductors.theory import DistributionGrid, mass, theory_grid


@pytest.fixture(scope="module")
def records_1e5():
    return conductor_records(FamilySpec(10.0**5, 1, 1))


class TestConductorRecords:
    def test_invariants(self, records_1e5):
        H = 10.0**5
        assert len(records_1e5) > 1000
        for r in records_1e5[::41]:
            assert r.ratio * r.conductor == abs(r.delta)
            assert 1 <= r.ratio <= 496 * H
            assert r.conductor <= 496 * H

    def test_threaded_matches_sequential(self):
        spec = FamilySpec(10.0**4, 1, 1)
        seq = conductor_records(spec, threads=1)
        par = conductor_records(spec, threads=4)
        assert [(r.a, r.b, r.conductor) for r in seq] == [
            (r.a, r.b, r.conductor) for r in par
        ]

    def test_oracle_path_agrees(self):
        spec = FamilySpec(2000.0, 1, 1)
        fast = conductor_records(spec, oracle=False)
        slow = conductor_records(spec, oracle=True)
        assert [(r.a, r.b, r.conductor) for r in fast] == [
            (r.a, r.b, r.conductor) for r in slow
        ]


class TestEmpiricalCdf:
    def test_edges(self, records_1e5):
        H = 10.0**5
        g = empirical_cdf(records_1e5, H, [0.5 / H, 496.0 * 1.01])
        assert g.cdf[0] == 0.0  # N >= 1 always
        assert g.cdf[1] == 1.0  # N <= 496 H always

    def test_monotone(self, records_1e5):
        H = 10.0**5
        g = empirical_cdf(records_1e5, H, np.linspace(1.0, 496.0, 100))
        assert np.all(np.diff(g.cdf) >= 0)

    def test_strict_inequality(self):
        recs = [ConductorRecord(0, 0, -11, 11)]
        g = empirical_cdf(recs, 1.0, [11.0, 11.000001])
        assert g.cdf[0] == 0.0  # N/H < lambda is strict
        assert g.cdf[1] == 1.0


class TestCountBelow:
    def test_all_and_none(self, records_1e5):
        H = 10.0**5
        assert count_conductor_below(records_1e5, 496.0 * H + 1) == len(records_1e5)
        assert count_conductor_below(records_1e5, 1.0) == 0

    def test_monotone_in_X(self, records_1e5):
        xs = [1e4, 1e5, 1e6, 1e7]
        counts = [count_conductor_below(records_1e5, x) for x in xs]
        assert counts == sorted(counts)


class TestMassHistogram:
    def test_frequencies_sum_to_one(self, records_1e5):
        freqs, over = mass_histogram(records_1e5, 30)
        assert sum(freqs.values()) + over == pytest.approx(1.0, abs=1e-12)

    def test_blank_table_entries_are_empty(self, records_1e5):
        freqs, _ = mass_histogram(records_1e5, 30)
        # rho(3, 3) = 0 and rho(2, 8) = 0: those masses never occur
        assert freqs[3] == 0.0
        assert freqs[6] == 0.0
        assert freqs[8] == 0.0
        assert freqs[9] == 0.0
        assert freqs[16] == 0.0
        assert freqs[24] == 0.0

    def test_mass_one_close_to_theory(self, records_1e5):
        freqs, _ = mass_histogram(records_1e5, 5)
        assert freqs[1] == pytest.approx(mass(1), abs=0.01)


class TestPowerLawFit:
    def test_exact_power(self):
        xs = [1.0, 2.0, 4.0, 8.0]
        ys = [x ** (5 / 6) for x in xs]
        assert power_law_fit(xs, ys) == pytest.approx(5 / 6, abs=1e-12)

    def test_constant_absorbed(self):
        xs = [1.0, 3.0, 9.0]
        ys = [7.3 * x ** (5 / 6) for x in xs]
        assert power_law_fit(xs, ys) == pytest.approx(5 / 6, abs=1e-12)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            power_law_fit([1.0, 2.0], [1.0, 0.0])
        with pytest.raises(ValueError):
            power_law_fit([1.0], [1.0])


class TestSupDistance:
    def test_identical_and_offset(self):
        lam = np.array([1.0, 2.0, 3.0])
        a = DistributionGrid(lam, np.array([0.1, 0.2, 0.3]), "theory")
        b = DistributionGrid(lam, np.array([0.2, 0.3, 0.4]), "empirical")
        assert sup_distance(a, a) == 0.0
        assert sup_distance(a, b) == pytest.approx(0.1, abs=1e-15)

    def test_grid_mismatch(self):
        a = DistributionGrid([1.0, 2.0], [0.1, 0.2], "theory")
        b = DistributionGrid([1.0, 3.0], [0.1, 0.2], "theory")
        with pytest.raises(ValueError):
            sup_distance(a, b)


def test_compare_end_to_end():
    spec = FamilySpec(10.0**4, 1, 1)
    lams = np.arange(1, 11) * 49.6
    rep = compare(spec, lams, m_max=10)
    assert isinstance(rep, ComparisonReport)
    assert rep.n_curves == 231
    assert rep.sup_dist == sup_distance(rep.empirical, rep.theory)
    assert rep.sup_dist < 0.2  # small sample, loose sanity bound
    assert rep.mass_theory[1] == pytest.approx(mass(1), abs=1e-15)


class TestCensus:
    def test_p5_table_counts(self):
        p = 5
        c1 = reduction_type_census(p, 1, seed=3)
        c2 = reduction_type_census(p, 2, seed=3)
        c3 = reduction_type_census(p, 3, seed=3)
        c4 = reduction_type_census(p, 4, seed=3)
        assert c1["I0"] == p * (p - 1)
        assert c2["I1"] == p * (p - 1) ** 2
        assert c2["II"] == p * (p - 1)
        assert c2["III"] == p - 1
        assert c3["I2"] == p**2 * (p - 1) ** 2
        assert c3["IV"] == p * (p - 1)
        assert c4["I3"] == p**3 * (p - 1) ** 2
        assert c4["I0*"] == p**2 * (p - 1)

    def test_determined_counts_scale_with_modulus(self):
        # a type pinned mod p^k occupies p^2 times as many classes mod p^(k+1)
        p = 5
        c2 = reduction_type_census(p, 2, seed=0)
        c3 = reduction_type_census(p, 3, seed=0)
        assert c3["II"] == p**2 * c2["II"]
        assert c3["III"] == p**2 * c2["III"]

    def test_seed_invariance_of_determined_types(self):
        a = reduction_type_census(5, 2, seed=0)
        b = reduction_type_census(5, 2, seed=99)
        for t in ("I0", "I1", "II", "III"):
            assert a[t] == b[t]

    def test_rejects_small_prime(self):
        with pytest.raises(ValueError):
            reduction_type_census(3, 2)
