import math
from fractions import Fraction

import numpy as np
import pytest

from conductors.theory import (
    DISC_HI,
    DISC_SUP,
    DistributionGrid,
    euler_ratio_check,
    f_delta,
    f_delta_closed_zero,
    identity_rad_euler,
    main_term,
    mass,
    mass_majorant,
    mass_product_form,
    mass_rational,
    mass_tail_bound,
    pdf_numeric,
    rho,
    rho_column_sum,
    rho_pn,
    theory_grid,
    zeta_ratio,
    zeta_ratio_closed_form,
)


class TestDistributionGrid:
    def test_validation(self):
        with pytest.raises(ValueError):
            DistributionGrid([1.0, 2.0], [0.1], "theory")
        with pytest.raises(ValueError):
            DistributionGrid([1.0, 1.0], [0.1, 0.2], "theory")


class TestFDelta:
    def test_support(self):
        assert f_delta(-DISC_SUP - 1.0) == 0.0
        assert f_delta(-float(DISC_SUP)) == 0.0
        assert f_delta(float(DISC_HI)) == 1.0
        assert f_delta(100.0) == 1.0

    def test_endpoint_continuity(self):
        assert f_delta(-495.9) == pytest.approx(0.0, abs=1e-3)
        assert f_delta(63.9) == pytest.approx(1.0, abs=1e-3)

    def test_closed_form_at_zero(self):
        assert f_delta(0.0) == pytest.approx(f_delta_closed_zero(), abs=1e-9)
        assert f_delta_closed_zero() == pytest.approx(1 - 2 / (15 * math.sqrt(3)), abs=0)

    def test_monotone(self):
        grid = np.linspace(-500, 70, 2000)
        vals = [f_delta(float(x)) for x in grid]
        assert all(b - a >= -1e-12 for a, b in zip(vals, vals[1:]))

    def test_montecarlo_agreement(self):
        rng = np.random.default_rng(7)
        n = 400_000
        al = rng.uniform(-1, 1, n)
        be = rng.uniform(-1, 1, n)
        disc = -16 * (4 * al**3 + 27 * be**2)
        for lam in (-400.0, -100.0, -20.0, 0.0, 20.0, 60.0):
            assert f_delta(lam) == pytest.approx(float(np.mean(disc < lam)), abs=5e-3)

    def test_scaling_band(self):
        # (F(lam) - F(-lam)) / lam^(5/6) bounded above and below
        for lam in np.geomspace(1e-6, 64.0, 40):
            ratio = (f_delta(float(lam)) - f_delta(-float(lam))) / lam ** (5 / 6)
            assert 0.01 <= ratio <= 10.0


class TestRho:
    def test_table_p2(self):
        assert rho_pn(2, 0) == Fraction(1, 2)
        assert rho_pn(2, 1) == Fraction(1, 4)
        assert rho_pn(2, 2) == Fraction(1, 4)
        assert rho_pn(2, 3) == 0

    def test_table_p3(self):
        assert rho_pn(3, 0) == 1
        assert rho_pn(3, 1) == 0

    def test_table_p5(self):
        p = 5
        q = Fraction(1, p)
        assert rho_pn(p, 0) == 1 - q * q
        assert rho_pn(p, 1) == q**2 * (1 - q)
        assert rho_pn(p, 2) == q**3 * (1 - q)
        assert rho_pn(p, 3) == q**4 * (1 - q) * (1 - q)
        assert rho_pn(p, 4) == q**5 * (1 - q) * (2 - q)
        assert rho_pn(p, 5) == q**6 * (1 - q) * (2 - 2 * q)
        assert rho_pn(p, 6) == q**7 * (1 - q) * (3 - 2 * q)
        assert rho_pn(p, 9) == q**10 * (1 - q) * (2 - 2 * q)

    def test_rho_uses_p_part_only(self):
        assert rho(5, 10) == rho_pn(5, 1)
        assert rho(5, 6) == rho_pn(5, 0)
        assert rho(2, 12) == rho_pn(2, 2)

    def test_column_sums(self):
        # sum_n rho(p, p^n) = 1 at p = 2, 3 and 1 - p^-10 at p >= 5,
        # which makes prod_p sum equal 1/zeta^(6)(10)
        assert rho_column_sum(2) == 1
        assert rho_column_sum(3) == 1
        for p in (5, 7, 11, 101):
            assert rho_column_sum(p) == 1 - Fraction(1, p**10)


class TestMass:
    def test_zeta_ratio_closed_form(self):
        assert zeta_ratio() == pytest.approx(zeta_ratio_closed_form(), abs=1e-12)

    def test_mass_one(self):
        # w(1) = zr * rho(2,1) rho(3,1) = zr / 2
        assert mass(1) == pytest.approx(zeta_ratio() / 2, abs=1e-15)
        assert mass(1) == pytest.approx(0.45594537, abs=1e-7)

    def test_mass_zero_cases(self):
        assert mass(3) == 0.0  # rho(3, 3) = 0
        assert mass(8) == 0.0  # rho(2, 8) = 0
        assert mass(9) == 0.0

    def test_mass_two_forms_agree(self):
        for m in (1, 2, 4, 5, 7, 10, 20, 25, 35, 60, 124, 496):
            assert mass(m) == pytest.approx(mass_product_form(m), abs=1e-13)

    def test_mass_rational_exact(self):
        assert mass_rational(1) == Fraction(1, 2)
        assert mass_rational(2) == Fraction(1, 4)
        assert mass_rational(5) == Fraction(1, 2) * (Fraction(4, 125) / Fraction(24, 25))

    def test_majorant_dominates(self):
        zr = zeta_ratio()
        for m in range(1, 2000):
            assert mass(m) <= zr * mass_majorant(m) + 1e-15

    def test_tail_bound_certified(self):
        # tail bound at M dominates the actual mass beyond M (checked on a window)
        M = 2000
        bound = mass_tail_bound(M, prime_bound=10**5)
        window = sum(mass(m) for m in range(M + 1, 4 * M))
        assert 0 < window < bound
        # total mass sums to 1; the tail bound must cover the deficit
        head = sum(mass(m) for m in range(1, M + 1))
        assert 1.0 - head <= bound


class TestMainTerm:
    def test_normalization(self):
        assert main_term(0.0, float(DISC_SUP)) == pytest.approx(1.0, abs=1e-6)

    def test_monotone_and_bounded(self):
        vals = [main_term(0.0, lam) for lam in (1.0, 5.0, 50.0, 200.0, 496.0)]
        assert all(0.0 <= v <= 1.0 for v in vals)
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_additivity(self):
        a = main_term(0.0, 10.0)
        b = main_term(10.0, 50.0)
        c = main_term(0.0, 50.0)
        assert a + b == pytest.approx(c, abs=1e-7)

    def test_domain(self):
        with pytest.raises(ValueError):
            main_term(-1.0, 1.0)
        with pytest.raises(ValueError):
            main_term(2.0, 1.0)

    def test_grid(self):
        lams = np.array([4.96, 49.6, 496.0])
        g = theory_grid(lams)
        assert g.source == "theory"
        assert g.cdf[-1] == pytest.approx(1.0, abs=1e-6)
        assert g.cdf[0] == pytest.approx(main_term(0.0, 4.96), abs=1e-12)


class TestPdfNumeric:
    def test_recovers_linear_density(self):
        lam = np.linspace(0.0, 10.0, 101)
        grid = DistributionGrid(lam, lam / 10.0, "theory")
        pairs = pdf_numeric(grid, dlam=0.5)
        interior = [d for (x, d) in pairs if 0.6 < x < 9.4]
        assert all(d == pytest.approx(0.1, abs=1e-9) for d in interior)

    def test_rejects_uneven_grid(self):
        grid = DistributionGrid([0.0, 1.0, 3.0], [0.0, 0.5, 1.0], "theory")
        with pytest.raises(ValueError):
            pdf_numeric(grid, dlam=1.0)


class TestIdentities:
    def test_rad_euler_identity(self):
        lhs, rhs, budget = identity_rad_euler(2.0)
        assert budget <= 1e-3
        assert lhs == pytest.approx(rhs, abs=budget)

    def test_euler_ratio_converges(self):
        for q in (100, 1000, 10000):
            assert abs(euler_ratio_check(q) - 1.0) <= 10.0 / q
