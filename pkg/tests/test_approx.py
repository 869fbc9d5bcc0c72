from fractions import Fraction

import mpmath
import pytest

from padelab import Backend
from padelab.approx import (ConsistencyError, HPComponent, PadeRow, check_order_conditions, hermite_pade,
                            incomplete, incomplete_row, pade, telescope, telescope_row)
from padelab.poly import Polynomial, roots
from padelab.scalar import half_tol
from padelab.series import (InsufficientCoefficients, PowerSeries, SeriesSystem, catalog_entire,
                            catalog_rational)

E, F = Backend.EXACT, Backend.FLOAT


def P(*cs, backend=E):
    return Polynomial(tuple(cs), backend)


def close(p, q, tol=None):
    tol = tol or half_tol()
    p, q = p.to_float(), q.to_float()
    return max(abs(p.coeff(k) - q.coeff(k)) for k in range(max(p.degree, q.degree) + 1)) <= tol


def four_pole():
    f1 = catalog_rational([(1, 1, 1), (3, 1, 1)])
    f2 = catalog_rational([(2, 1, 1), (4, 1, 1)])
    return SeriesSystem((f1, f2), (1, 1))


class TestPade:
    def test_geometric(self):
        r = pade(catalog_rational([(1, 1, 1)]), 3, 1)
        assert r.Q == P(-1, 1) and r.P == P(-1) and r.exact and r.unique

    def test_exp(self):
        r = pade(catalog_entire(), 1, 1)
        assert r.Q == P(-1, 1) and r.P == P(-1)

    def test_powers_of_two(self):
        f = PowerSeries(lambda n: 2 ** n, E)
        assert pade(f, 2, 1).Q == P(Fraction(-1, 2), 1)

    def test_rational_exact_far_beyond_n(self):
        f = catalog_rational([(1, 1, 1), (2, 1, 1)], [3])
        r = pade(f, 5, 2, check_extra=50)
        assert r.exact and r.Q == P(2, -3, 1)

    def test_m_zero_is_truncation(self):
        f = catalog_entire()
        r = pade(f, 4, 0)
        assert r.Q == P(1) and r.P == Polynomial(tuple(f.truncate(4)), E)

    def test_preconditions(self):
        with pytest.raises(ValueError):
            pade(catalog_entire(), 1, 2)
        short = PowerSeries.from_coefficients([1, 1, 1])
        with pytest.raises(InsufficientCoefficients):
            pade(short, 5, 1)

    def test_float_backend(self):
        f = catalog_rational([(1, 1, 1), (3, 1, 1)], backend=F)
        r = pade(f, 12, 1)
        ex = pade(catalog_rational([(1, 1, 1), (3, 1, 1)]), 12, 1)
        assert close(r.Q, ex.Q, mpmath.mpf(10) ** -40)

    def test_common_factor_removed(self):
        # f = 1/(1-z): the (4, 2) problem has a one-parameter family; gcd is cleared
        r = pade(catalog_rational([(1, 1, 1)]), 4, 2)
        assert r.Q.degree == 1 and r.Q == P(-1, 1)


class TestHermitePade:
    def test_two_poles(self):
        f1, f2 = catalog_rational([(1, 1, 1)]), catalog_rational([(2, 1, 1)])
        r = hermite_pade(SeriesSystem((f1, f2), (1, 1)), 2)
        assert r.Q == P(2, -3, 1)
        assert r.P == (P(2, -1), P(1, -1))
        assert r.exact and r.unique

    def test_reduces_to_pade(self):
        f = catalog_rational([(1, 1, 1)])
        h = hermite_pade(SeriesSystem((f,), (1,)), 3)
        p = pade(f, 3, 1)
        assert h.Q == p.Q and h.P == (p.P,)

    def test_not_unique(self):
        f = catalog_rational([(1, 1, 1)])
        r = hermite_pade(SeriesSystem((f, f), (1, 1)), 4)
        assert not r.unique and r.nullity >= 2

    def test_uniqueness_stable(self):
        s = four_pole()
        flags = [hermite_pade(s, n).unique for n in range(2, 31)]
        first = flags.index(True)
        assert all(flags[first:])
        assert first + 2 <= 10

    def test_lambda_bounds(self):
        s = four_pole()
        for n in range(2, 12):
            r = hermite_pade(s, n)
            assert 0 <= r.lam <= s.size


class TestIncomplete:
    def test_pade_row_strategy(self):
        r = incomplete(catalog_rational([(1, 1, 1)]), 3, 2, 1, PadeRow(1))
        assert [complex(z) for z in r.roots.points()] == [1]
        assert r.q_monic == P(-1, 1)
        assert r.p.degree <= 3 - 1 - r.lam

    def test_hp_component_spec_normalization(self):
        f1, f2 = catalog_rational([(1, 1, 1)]), catalog_rational([(2, 1, 1)])
        s = SeriesSystem((f1, f2), (1, 1))
        r = incomplete(None, 2, 2, 1, HPComponent(s, 1), cancel=False)
        expected = P(-1, 1, backend=F) * P(1, Fraction(-1, 2), backend=F)
        assert close(r.q, expected)

    def test_hp_component_cancels_by_default(self):
        f1, f2 = catalog_rational([(1, 1, 1)]), catalog_rational([(2, 1, 1)])
        s = SeriesSystem((f1, f2), (1, 1))
        r = incomplete(None, 2, 2, 1, HPComponent(s, 1))
        assert r.q_monic == P(-1, 1)

    def test_three_poles_row_two(self):
        f = catalog_rational([(1, 1, 1), (2, 1, 1), (4, 1, 1)])
        r = incomplete(f, 10, 2, 2, PadeRow(2))
        pts = sorted(r.roots.points(), key=lambda z: abs(z))
        assert abs(pts[0] - 1) < 1e-2 and abs(pts[1] - 2) < 1e-2

    def test_order_conditions(self):
        f = catalog_rational([(1, 1, 1), (2, 1, 1), (4, 1, 1)])
        for n in (6, 9):
            r = incomplete(f, n, 2, 1, PadeRow(2))
            d = r.q_monic * Polynomial(tuple(f.truncate(n)), E) - r.p_monic
            assert all(not d.coeff(j) for j in range(n - r.lam + 1))

    def test_invalid_strategy(self):
        f = catalog_rational([(1, 1, 1)])
        with pytest.raises(ValueError):
            incomplete(f, 3, 2, 1, PadeRow(3))
        with pytest.raises(ValueError):
            incomplete(f, 3, 1, 2, PadeRow(1))
        with pytest.raises(ValueError):
            incomplete(None, 4, 2, 1, HPComponent(four_pole(), 3))
        with pytest.raises(ValueError):
            incomplete(None, 4, 3, 1, HPComponent(four_pole(), 1))


class TestTelescope:
    def test_degenerate_for_recovered_rational(self):
        f = catalog_rational([(1, 1, 1)])
        a, b = incomplete_row(f, [4, 5], 1, 1, PadeRow(1))
        t = telescope(a, b)
        assert t.degenerate and t.A == 0

    def test_exp(self):
        a, b = incomplete_row(catalog_entire(), [1, 2], 1, 1, PadeRow(1))
        t = telescope(a, b)
        assert t.power == 2 and t.q_star.degree == 0 and t.A != 0
        assert abs(t.A - mpmath.mpf(1) / 2) < half_tol()

    def test_four_pole_component(self):
        recs = incomplete_row(None, [20, 21], 2, 1, HPComponent(four_pole(), 1))
        t = telescope(*recs)
        assert t.q_star.degree == 1
        assert abs(t.q_star_roots[0] - 2) < 1e-3

    def test_identity_exact_on_monic_pairs(self):
        recs = incomplete_row(None, range(8, 14), 2, 1, HPComponent(four_pole(), 1))
        for a, b, t in zip(recs, recs[1:], telescope_row(recs)):
            lhs = b.p_monic * a.q_monic - a.p_monic * b.q_monic
            assert lhs == t.raw_cofactor.shift(t.power)

    def test_identity_normalized(self):
        recs = incomplete_row(None, [14, 15], 2, 1, HPComponent(four_pole(), 1))
        a, b = recs
        t = telescope(a, b)
        lhs = b.p * a.q - a.p * b.q
        rhs = t.q_star.shift(t.power).scale(t.A)
        scale = max(abs(c) for c in lhs.coeffs)
        assert close(lhs, rhs, half_tol() * scale)

    def test_non_consecutive_rejected(self):
        f = catalog_entire()
        a, b = incomplete_row(f, [3, 5], 1, 1, PadeRow(1))
        with pytest.raises(ValueError):
            telescope(a, b)


class TestRevalidation:
    def test_check_order_conditions(self):
        f = catalog_rational([(1, 1, 1), (3, 1, 1)])
        r = pade(f, 10, 1)
        assert check_order_conditions(r.Q, f, 10, 1, r.lam) == 0
        with pytest.raises(ConsistencyError):
            check_order_conditions(r.Q + P(Fraction(1, 10 ** 6)), f, 10, 1, r.lam)
