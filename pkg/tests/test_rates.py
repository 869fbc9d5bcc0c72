import math
from fractions import Fraction

import mpmath
import pytest

from padelab import Backend
from padelab.approx import HPComponent, PadeRow, TelescopeData, incomplete_row, pade, telescope_row
from padelab.diagnostics import (DegenerateHankel, estimate_R_star, fabry, hadamard_radius, rate_estimate,
                                 theta)
from padelab.poly import Polynomial
from padelab.series import PowerSeries, SeriesSystem, add, catalog_entire, catalog_rational

from .oracles import limsup_root

E = Backend.EXACT


def P(*cs):
    return Polynomial(tuple(cs), E)


class TestRateEstimate:
    def test_geometric(self):
        est = rate_estimate([(n, mpmath.mpf(3) ** -n) for n in range(1, 41)])
        assert abs(est.fit_estimate - 1 / 3) < 1e-10
        assert est.tail_estimate == pytest.approx(1 / 3, rel=1e-10)

    def test_zero_sentinel(self):
        est = rate_estimate([(n, 0) for n in range(1, 20)])
        assert est.zero_sentinel

    def test_superexponential_flag(self):
        est = rate_estimate([(n, 1 / mpmath.factorial(n)) for n in range(1, 60)])
        assert est.superexponential


class TestTheta:
    def test_recovery_sentinel(self):
        f = catalog_rational([(1, 1, 1)])
        seq = [(n, pade(f, n, 1).Q) for n in range(2, 14)]
        assert theta(seq, P(-1, 1)).zero_sentinel

    def test_scalar_rate(self):
        f = catalog_rational([(1, 1, 1), (3, 1, 1)])
        seq = [(n, pade(f, n, 1).Q) for n in range(2, 61)]
        est = theta(seq, P(-1, 1), window=31)
        assert abs(est.fit_estimate - 1 / 3) < 0.05

    def test_scale_invariance(self):
        f = catalog_rational([(1, 1, 1), (3, 1, 1)])
        seq = [(n, pade(f, n, 1).Q) for n in range(2, 20)]
        scaled = [(n, Q.scale(Fraction(-7, 3))) for n, Q in seq]
        a, b = theta(seq, P(-1, 1)), theta(scaled, P(-1, 1).scale(5))
        assert a.fit_estimate == b.fit_estimate and a.tail_estimate == b.tail_estimate

    def test_degree_mismatch(self):
        seq = [(n, P(-1, 1)) for n in range(10)]
        with pytest.raises(ValueError):
            theta(seq, P(2, -3, 1))

    def test_too_few(self):
        with pytest.raises(ValueError):
            theta([(n, P(-1, 1)) for n in range(5)], P(-1, 1))


class TestFabry:
    def test_geometric(self):
        r = fabry(PowerSeries(lambda n: Fraction(1, 2 ** n), E), 40)
        assert r.verdict == "limit" and r.limit == 2 and r.R0 == 2

    def test_divergent(self):
        r = fabry(catalog_entire(), 40)
        assert r.verdict == "divergent"

    def test_parity(self):
        r = fabry(PowerSeries(lambda n: 1 + (-1) ** n, E), 40)
        assert r.verdict == "none" and r.undefined

    @pytest.mark.parametrize("a", [Fraction(1, 2), 1, 2, 4])
    def test_pole_plus_entire(self, a):
        f = add(catalog_rational([(a, 1, 1)]), catalog_entire())
        r = fabry(f, 60)
        assert r.verdict == "limit" and abs(r.limit - a) < 1e-4


class TestHadamard:
    def test_R0_matches_brute_force(self):
        f = catalog_rational([(1, 1, 1), (3, 1, 1)])
        est = hadamard_radius(f, 0, 60)
        oracle = 1 / limsup_root([(n, float(f.coeff(n).re)) for n in range(1, 61)])
        assert abs(est.fit - oracle) < 0.02 and abs(est.fit - 1) < 0.05

    def test_R1(self):
        f = catalog_rational([(1, 1, 1), (3, 1, 1)])
        assert abs(hadamard_radius(f, 1, 60).fit - 3) < 0.15

    def test_entire(self):
        assert math.isinf(hadamard_radius(catalog_entire(), 0, 60).fit)

    def test_degenerate(self):
        f = catalog_rational([(1, 1, 1), (3, 1, 1)])
        with pytest.raises(DegenerateHankel):
            hadamard_radius(f, 2, 30)

    @pytest.mark.parametrize("poles", [[1, 3], [2, 4], [1, 4], [Fraction(1, 2), 2]])
    def test_catalog_cross_check(self, poles):
        f = catalog_rational([(a, 1, 1) for a in poles])
        for m in (0, 1):
            assert abs(hadamard_radius(f, m, 60).fit / f.radius(m) - 1) < 0.05


def synthetic(As, start=1):
    return [TelescopeData(n, mpmath.mpc(a), Polynomial((1,), Backend.FLOAT), n + 1, a == 0, Polynomial((1,), E))
            for n, a in enumerate(As, start=start)]


class TestRStar:
    def test_degenerate_is_infinite(self):
        f = catalog_rational([(1, 1, 1)])
        tels = telescope_row(incomplete_row(f, range(2, 20), 1, 1, PadeRow(1)))
        assert all(t.degenerate for t in tels)
        assert math.isinf(estimate_R_star(tels).fit)

    def test_synthetic(self):
        est = estimate_R_star(synthetic([mpmath.mpf(2) ** -n for n in range(1, 41)]))
        assert abs(est.fit - 2) < 1e-9 and abs(est.tail - 2) < 0.1

    def test_too_few(self):
        with pytest.raises(ValueError):
            estimate_R_star(synthetic([mpmath.mpf(2) ** -n for n in range(1, 6)]))

    def test_four_pole_component(self):
        f1 = catalog_rational([(1, 1, 1), (3, 1, 1)])
        f2 = catalog_rational([(2, 1, 1), (4, 1, 1)])
        recs = incomplete_row(None, range(10, 45), 2, 1, HPComponent(SeriesSystem((f1, f2), (1, 1)), 1))
        assert abs(estimate_R_star(telescope_row(recs)).fit - 3) < 0.15
