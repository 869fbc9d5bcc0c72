"""Scanning linear combinations of a system for singularity and pole witnesses.

For ``m = (1, ..., 1)`` the admissible combinations are ``sum c_k f_k`` with
complex constants, so a real projective grid of coefficient vectors is
scanned. A combination is a singularity witness at ``zeta`` when its radius of
convergence matches ``|zeta|`` and its Fabry ratios converge to ``zeta``; it is
a pole witness when, in addition, the denominators of its first Padé row
converge geometrically to ``z - zeta``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from ..approx import hermite_pade, pade
from ..poly import Polynomial
from ..scalar import Backend, QQi, coerce, to_mpc
from ..series import CombinationSpec, SeriesSystem, combine
from .independence import polynomial_independence
from .rates import DegenerateHankel, fabry, hadamard_radius, theta

MARGIN = 0.05


def _snap(x: float) -> Fraction:
    if abs(x) < 1e-12:
        return Fraction(0)
    if abs(abs(x) - 1) < 1e-12:
        return Fraction(1 if x > 0 else -1)
    return Fraction(x).limit_denominator(10 ** 6)


def projective_grid(d: int, points: int = 41) -> list[tuple]:
    """Coefficient vectors covering the real projective space of dimension ``d-1``.

    ``d = 2``: angles ``k pi/(points-1)``, ``k = 0..points-1`` (the closed half
    circle, so both coordinate axes are present). ``d = 3``: a product grid of
    polar and azimuthal angles on the closed upper hemisphere, de-duplicated.
    Coordinates are rational so exact-backend combinations stay exact.
    """
    if d == 1:
        return [(Fraction(1),)]
    if points < 2:
        raise ValueError("grid needs at least 2 points")
    if d == 2:
        return [(_snap(math.cos(t)), _snap(math.sin(t)))
                for t in (k * math.pi / (points - 1) for k in range(points))]
    if d == 3:
        k = max(2, round(math.sqrt(points)))
        out, seen = [], set()
        for i in range(k):
            a = i * (math.pi / 2) / (k - 1)
            for j in range(k):
                b = j * 2 * math.pi / k
                c = (_snap(math.cos(a)), _snap(math.sin(a) * math.cos(b)), _snap(math.sin(a) * math.sin(b)))
                if c not in seen and any(c):
                    seen.add(c)
                    out.append(c)
        return out
    raise ValueError("grids are provided for d <= 3")


@dataclass(frozen=True)
class CombinationEvidence:
    coefficients: tuple
    R0: float | None
    fabry_verdict: str
    fabry_limit: complex | None
    radius_match: bool
    singularity_witness: bool
    pole_witness: bool
    pole_theta: float | None

    def summary(self) -> dict:
        lim = None if self.fabry_limit is None else [self.fabry_limit.real, self.fabry_limit.imag]
        return {"c": [str(c) for c in self.coefficients], "R0": self.R0, "fabry": self.fabry_verdict,
                "fabry_limit": lim, "radius_match": self.radius_match,
                "singularity_witness": self.singularity_witness, "pole_witness": self.pole_witness,
                "pole_theta": self.pole_theta}


@dataclass(frozen=True)
class ScanEvidence:
    zeta: complex
    grid_size: int
    per_point: tuple
    singularity_witness: bool
    pole_witness: bool

    @property
    def witnesses(self) -> list[CombinationEvidence]:
        return [e for e in self.per_point if e.singularity_witness]

    @property
    def pole_witnesses(self) -> list[CombinationEvidence]:
        return [e for e in self.per_point if e.pole_witness]

    def summary(self) -> dict:
        return {"zeta": [self.zeta.real, self.zeta.imag], "grid_size": self.grid_size,
                "singularity_witness": self.singularity_witness, "pole_witness": self.pole_witness,
                "witness_coefficients": [[str(c) for c in e.coefficients] for e in self.witnesses],
                "pole_witness_coefficients": [[str(c) for c in e.coefficients] for e in self.pole_witnesses]}


def _pole_row_theta(g, N: int, zeta: complex, margin: float):
    """Geometric rate of the first Padé row towards ``z - zeta``, or None."""
    lo = max(2, N // 2)
    recs = [pade(g, n, 1) for n in range(lo, N + 1)]
    if any(r.Q.degree != 1 for r in recs):
        return None
    root = complex(-to_mpc(recs[-1].Q.coeffs[0]))
    if abs(root - zeta) > margin * abs(zeta):
        return None
    limit = Polynomial((-root, 1), Backend.FLOAT)
    est = theta([(r.n, r.Q) for r in recs[:-1]], limit)
    return 0.0 if est.zero_sentinel else est.fit_estimate


def system_pole_scan(system: SeriesSystem, zeta: complex, grid: Sequence[tuple] | int = 41, N: int = 60,
                     margin: float = MARGIN) -> ScanEvidence:
    """Look for combinations witnessing a system singularity and a system pole at ``zeta``."""
    if any(m != 1 for m in system.multi_index):
        raise ValueError("system_pole_scan is restricted to multi-indices (1, ..., 1)")
    if system.d > 3:
        raise ValueError("system_pole_scan supports d <= 3")
    points = projective_grid(system.d, grid) if isinstance(grid, int) else list(grid)
    if not points:
        raise ValueError("empty grid")
    zeta = complex(zeta)
    backend = system.backend
    out = []
    for c in points:
        spec = CombinationSpec(tuple(Polynomial((coerce(x, backend),), backend) for x in c))
        try:
            spec.validate(system)
        except ValueError:
            continue
        g = combine(system, spec)
        if (g.closed_form is not None and g.closed_form.is_zero()) or all(not g.coeff(k) for k in range(N + 1)):
            out.append(CombinationEvidence(tuple(c), None, "none", None, False, False, False, None))
            continue
        try:
            r0 = hadamard_radius(g, 0, N)
            R0 = r0.fit
        except DegenerateHankel:
            R0 = math.inf
        fab = fabry(g, N)
        lim = None if fab.limit is None else complex(fab.limit)
        radius_match = math.isfinite(R0) and abs(R0 - abs(zeta)) <= margin * abs(zeta)
        sing = radius_match and lim is not None and abs(lim - zeta) <= margin * abs(zeta)
        th = _pole_row_theta(g, N, zeta, margin) if sing else None
        pole = th is not None and th < 1 - margin
        out.append(CombinationEvidence(tuple(c), R0, fab.verdict, lim, radius_match, sing, pole, th))
    return ScanEvidence(zeta, len(points), tuple(out), any(e.singularity_witness for e in out),
                        any(e.pole_witness for e in out))


@dataclass(frozen=True)
class ConjectureProbe:
    ns: tuple
    unique_from: int | None
    limit_roots: tuple
    theta: dict | None
    independence: dict
    scans: tuple

    def summary(self) -> dict:
        return {"n_range": [self.ns[0], self.ns[-1]], "unique_from": self.unique_from,
                "limit_roots": [[z.real, z.imag, k] for z, k in self.limit_roots], "theta": self.theta,
                "independence": self.independence, "scans": [s.summary() for s in self.scans]}


def conjecture_probe(system: SeriesSystem, ns: Sequence[int], grid: int = 41, N: int = 60,
                     margin: float = MARGIN, records: Sequence | None = None) -> ConjectureProbe:
    """Hermite-Padé row, limit denominator, then a witness scan at each limit zero."""
    recs = list(records) if records is not None else [hermite_pade(system, n) for n in ns]
    unique_from = None
    for r in recs:
        if r.unique and unique_from is None:
            unique_from = r.n
        elif not r.unique:
            unique_from = None
    last = recs[-1]
    rs = last.roots
    th = None
    same = [(r.n, r.Q) for r in recs[:-1] if r.Q.degree == last.Q.degree]
    if len(same) >= 10:
        th = theta(same, last.Q).summary()
    indep = polynomial_independence(system, max(N, 2 * system.size + 20)).summary()
    scans = tuple(system_pole_scan(system, complex(z), grid, N, margin) for z, _ in rs.roots) \
        if all(m == 1 for m in system.multi_index) else ()
    return ConjectureProbe(tuple(ns), unique_from, tuple((complex(z), k) for z, k in rs.roots), th, indep, scans)
