import math
from fractions import Fraction

import mpmath
import pytest

from padelab.diagnostics import regularize, upper_hull

from .oracles import brute_force_majorant


def concave_A(N):
    # u_n = -(n - 20)^2 / 50 is concave, so A_n = n! exp(u_n)
    return [mpmath.factorial(n) * mpmath.exp(-mpmath.mpf((n - 20) ** 2) / 50) for n in range(N)]


def test_concave_data_is_its_own_majorant():
    reg = regularize(concave_A(40))
    assert reg.contact == tuple(range(40))
    assert all(reg.u_hat[n] == reg.u[n] for n in reg.ns)


def test_single_dip_interpolated():
    A = concave_A(40)
    A[17] = A[17] / 1000
    reg = regularize(A)
    assert 17 not in reg.contact
    assert reg.u_hat[17] == reg.u_hat[16] + (reg.u_hat[18] - reg.u_hat[16]) / 2
    assert set(reg.contact) == set(range(40)) - {17}


def test_oscillating_matches_brute_force():
    A = [abs(mpmath.cos(n)) * mpmath.factorial(n) for n in range(1, 101)]
    reg = regularize(A, n_offset=1)
    oracle = brute_force_majorant(sorted(reg.u.items()))
    assert all(reg.u_hat[n] == oracle[n] for n in reg.ns)
    hull = {x for x, _ in upper_hull(sorted(reg.u.items()))}
    assert set(reg.contact) == hull
    assert all(reg.u[n] <= reg.u_hat[n] for n in reg.u)
    assert reg.checks["ii_concave"] and reg.checks["iii_majorant"] and reg.checks["iv_contact"]


def test_zeros_skipped_and_rescaling():
    A = [mpmath.mpf(3) ** -n if n % 5 else 0 for n in range(1, 60)]
    reg = regularize(A, n_offset=1, radius=3)
    assert all(n % 5 for n in reg.u)
    lo, hi = reg.tail_ratio_range
    assert 0.8 <= lo <= hi <= 1.25


def test_second_differences_exact():
    reg = regularize([abs(mpmath.sin(n)) + 1 for n in range(60)])
    ns = reg.ns
    assert all(reg.u_hat[n - 1] - 2 * reg.u_hat[n] + reg.u_hat[n + 1] <= 0 for n in ns[1:-1])
    assert all(isinstance(reg.u_hat[n], Fraction) for n in ns)


def test_too_few_points():
    with pytest.raises(ValueError):
        regularize([1, 0, 0, 2])


def test_A_star_positive():
    reg = regularize(concave_A(30))
    assert all(reg.A_star(n) > 0 for n in reg.ns)
    assert reg.log_A_star(10) == pytest.approx(float(mpmath.log(reg.A_star(10))), rel=1e-12)
