"""Acceptance criteria #1-#10, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` (the lines are also printed
without ``-s``, through the terminal) or ``python -m tests.test_acceptance``.
"""
from __future__ import annotations

import statistics
import sys
from fractions import Fraction
from functools import lru_cache

import pytest

from padelab import Backend
from padelab.approx import HPComponent, PadeRow, hermite_pade, incomplete_row, pade, telescope_row
from padelab.diagnostics import (approximation_error_rate, classify, estimate_R_star, fabry, hadamard_radius,
                                 polynomial_independence, qstar_distances, regularize, system_pole_scan, theta,
                                 track_zeros, verify_witness)
from padelab.poly import Polynomial
from padelab.series import SeriesSystem, add, catalog_entire, catalog_log_branch, catalog_rational

E = Backend.EXACT
RESULTS: dict[str, tuple[bool, str]] = {}


def report(key: str, ok: bool, detail: str) -> None:
    RESULTS[key] = (ok, detail)
    line = f"[{'PASS' if ok else 'FAIL'}] {key}: {detail}"
    sys.__stdout__.write(line + "\n")
    sys.__stdout__.flush()


def P(*cs):
    return Polynomial(tuple(cs), E)


def f_13():
    return catalog_rational([(1, 1, 1), (3, 1, 1)])


def f_24():
    return catalog_rational([(2, 1, 1), (4, 1, 1)])


@lru_cache(maxsize=None)
def four_pole():
    return SeriesSystem((f_13(), f_24()), (1, 1))


@lru_cache(maxsize=None)
def component_run():
    recs = incomplete_row(None, range(10, 62), 2, 1, HPComponent(four_pole(), 1))
    return recs, telescope_row(recs)


# 1 -------------------------------------------------------------------------

def test_01_rational_exactness():
    f = catalog_rational([(1, 1, 1), (2, 1, 1)])
    target = P(2, -3, 1)
    bad = []
    for n in range(3, 21):
        r = pade(f, n, 2, check_extra=50)
        if not (r.Q == target and r.exact and r.residual == 0):
            bad.append(n)
    ok = not bad
    report("#1 rational exactness", ok,
           f"Q=(z-1)(z-2) with zero residuals for n=3..20; failing n: {bad or 'none'}")
    assert ok


@pytest.mark.xfail(strict=True, reason="n=2 lies outside the rational-recovery hypothesis (deg numerator 1 > n-m=0)")
def test_01_literal_n2():
    f = catalog_rational([(1, 1, 1), (2, 1, 1)])
    # oracle: (z-1)(z-2) f = 3 - 2z, so no constant P matches through z^1
    prod = P(2, -3, 1) * Polynomial(tuple(f.truncate(4)), E)
    impossible = prod.coeff(1) != 0
    r = pade(f, 2, 2)
    report("#1 literal n=2 clause", False,
           f"NOT MET (unattainable): returned Q={[str(c) for c in r.Q.coeffs]} satisfies the (2,2) conditions; "
           f"(z-1)(z-2) cannot (z^1 coefficient of Q f is {prod.coeff(1)}), impossible={impossible}")
    assert impossible
    assert r.Q == P(2, -3, 1)


# 2 -------------------------------------------------------------------------

def test_02_scalar_theta():
    f = f_13()
    recs = [pade(f, n, 1) for n in range(1, 61)]
    th = theta([(r.n, r.Q) for r in recs], P(-1, 1))
    sup = approximation_error_rate(f, recs, 2)
    ok = 0.28 <= th.fit_estimate <= 0.38 and abs(sup.fit_estimate - 2 / 3) <= 0.05
    report("#2 scalar theta", ok,
           f"theta fit={th.fit_estimate:.4f} (target 1/3, band [0.28,0.38]); "
           f"sup-norm rate on |z|=2 fit={sup.fit_estimate:.4f} (target 2/3 +- 0.05)")
    assert ok


# 3 -------------------------------------------------------------------------

def test_03_system_theta():
    s = four_pole()
    recs = [hermite_pade(s, n) for n in range(1, 61)]
    n0 = None
    for r in recs:
        if r.unique and n0 is None:
            n0 = r.n
        elif not r.unique:
            n0 = None
    limit = P(2, -3, 1)
    same = [(r.n, r.Q) for r in recs if r.Q.degree == 2]
    th = theta(same, limit)
    last_roots = sorted(complex(z).real for z in recs[-1].roots.points())
    ok = n0 is not None and n0 <= 10 and 0.45 <= th.fit_estimate <= 0.55 and \
        all(abs(a - b) < 1e-6 for a, b in zip(last_roots, (1, 2)))
    report("#3 system theta", ok,
           f"unique from n0={n0}; Q_60 roots={[round(x, 8) for x in last_roots]}; "
           f"theta fit={th.fit_estimate:.4f} (target 1/2, band [0.45,0.55])")
    assert ok


# 4 -------------------------------------------------------------------------

def test_04_fabry():
    errs = {}
    for a in (Fraction(1, 2), 1, 2, 4):
        r = fabry(add(catalog_rational([(a, 1, 1)]), catalog_entire()), 60)
        errs[str(a)] = float(abs(r.limit - a)) if r.limit is not None else float("inf")
    ok = all(e <= 1e-4 for e in errs.values())
    report("#4 Fabry", ok, "limit errors at N=60: " + ", ".join(f"a={k}: {v:.2e}" for k, v in errs.items()))
    assert ok


# 5 -------------------------------------------------------------------------

def test_05_qstar_attraction():
    recs, tels = component_run()
    est = estimate_R_star(tels)
    traj = track_zeros(recs)
    has2 = any(abs(c.limit - 2) < 1e-2 for c in traj.clusters)
    reg = regularize([t.A for t in tels], n_offset=tels[0].n, radius=est.fit)
    idx = [n for n in reg.contact if 30 <= n <= 60]
    dists = [d for _, d in qstar_distances(2, tels, idx)]
    med = statistics.median(dists) if dists else float("inf")
    ok = has2 and med <= 1e-2 and 2.7 <= est.fit <= 3.3
    report("#5 q* attraction", ok,
           f"cluster at 2: {has2}; median dist(2, q*) over {len(idx)} contact indices in [30,60] = {med:.2e}; "
           f"R* fit={est.fit:.4f} (band [2.7,3.3])")
    assert ok


# 6 -------------------------------------------------------------------------

def test_06_boundary_pattern():
    f = add(catalog_rational([(1, 1, 1)]), catalog_log_branch(2))
    ns = range(30, 61)
    recs = incomplete_row(f, list(ns) + [61], 2, 2, PadeRow(2))
    R1 = f.radius(1)
    near2 = sum(1 for r in recs[:-1] if any(abs(z - 2) <= 0.15 for z in r.roots.points()))
    frac = near2 / len(ns)
    rep = classify(track_zeros(recs[:-1]), R1, telescopes=telescope_row(recs), m=2, m_star=2)
    pole = [e for e in rep.entries if e.kind == "pole" and abs(e.location - 1) < 1e-2]
    geometric = bool(pole) and pole[0].order == 1 and pole[0].evidence["rate_fit"] < 0.9
    boundary = [e for e in rep.entries if e.kind == "boundary_singularity" and abs(e.location - 2) <= 0.15]
    ok = geometric and frac >= 0.7 and bool(boundary)
    rate = pole[0].evidence["rate_fit"] if pole else None
    report("#6 boundary pattern (observational)", ok,
           f"pole(1) order={pole[0].order if pole else None} rate fit={rate}; root within 0.15 of 2 for "
           f"{frac:.0%} of n in [30,60]; boundary entry at "
           f"{[round(e.location.real, 4) for e in boundary]} with R*=R_1={R1} from metadata")
    assert ok


# 7 -------------------------------------------------------------------------

def test_07_regularization():
    _, tels = component_run()
    est = estimate_R_star(tels)
    reg = regularize([t.A for t in tels], n_offset=tels[0].n, radius=est.fit)
    lo, hi = reg.tail_ratio_range
    c = reg.checks
    ok = c["ii_concave"] and c["iii_majorant"] and c["iv_contact"] and len(reg.contact) > 0 and \
        0.8 <= lo <= hi <= 1.25
    report("#7 regularization", ok,
           f"ii={c['ii_concave']} iii={c['iii_majorant']} iv={c['iv_contact']} |Lambda|={len(reg.contact)}; "
           f"i) tail ratios in [{lo:.4f}, {hi:.4f}] (soft band [0.8,1.25])")
    assert ok


# 8 -------------------------------------------------------------------------

def _wit(ps):
    return [[str(c) for c in p.coeffs] for p in ps]


def test_08_independence():
    f = f_13()
    same = SeriesSystem((f, f), (1, 1))
    with_poly = SeriesSystem((f, catalog_rational([], [1, -2, 3])), (1, 1))
    v1 = polynomial_independence(same, 40)
    v2 = polynomial_independence(with_poly, 40)
    v3 = polynomial_independence(four_pole(), 40)
    w1 = not v1.independent and verify_witness(same, v1.witness, v1.first_row, 40)
    w2 = not v2.independent and verify_witness(with_poly, v2.witness, v2.first_row, 40)
    ok = w1 and w2 and v3.independent
    report("#8 polynomial independence", ok,
           f"(f,f) dependent witness={_wit(v1.witness) if v1.witness else None}; "
           f"(f,poly) dependent witness={_wit(v2.witness) if v2.witness else None}; "
           f"#3 system independent at N=40: {v3.independent}")
    assert ok


# 9 -------------------------------------------------------------------------

def test_09_conjecture_harness():
    s = four_pole()
    ev = {z: system_pole_scan(s, z, grid=41) for z in (1, 2, 3)}
    ok = all(ev[z].singularity_witness and ev[z].pole_witness for z in (1, 2))
    w3 = [tuple(str(c) for c in e.coefficients) for e in ev[3].witnesses]
    report("#9 conjecture harness", ok,
           f"zeta=1: {len(ev[1].witnesses)}/{ev[1].grid_size} singular, {len(ev[1].pole_witnesses)} pole witnesses; "
           f"zeta=2: {len(ev[2].witnesses)} singular, {len(ev[2].pole_witnesses)} pole witnesses "
           f"(c1 of all: {sorted({str(e.coefficients[0]) for e in ev[2].witnesses})}); "
           f"zeta=3 (reported only): witnesses {w3 or 'none'}")
    assert ok


# 10 ------------------------------------------------------------------------

def test_10_hadamard():
    rel = {}
    for name, f in (("f1=1/(1-z)+1/(3-z)", f_13()), ("f2=1/(2-z)+1/(4-z)", f_24())):
        for m in (0, 1):
            est = hadamard_radius(f, m, 60).fit
            rel[f"{name} R{m}"] = (est, abs(est / f.radius(m) - 1))
    ok = all(r <= 0.05 for _, r in rel.values())
    report("#10 Hadamard radii", ok, "; ".join(f"{k}={v:.4f} ({r:.2%})" for k, (v, r) in rel.items()))
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
