"""Log-concave regularization of a coefficient-size stream.

The data ``u_n = log|A_n| - log n!`` are rounded once to doubles and then held
as exact rationals. The least concave majorant is built on those rationals, so
concavity, majorization and contact are exact statements about the stored
values rather than floating-point approximations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from ..scalar import mp_log_abs


@dataclass(frozen=True)
class RegularizedSequence:
    ns: tuple                  # indices covered by the majorant
    u: dict                    # n -> log|A_n| - log n! (usable n only)
    u_hat: dict                # n -> majorant value (Fraction), every n in ns
    contact: tuple             # Lambda: indices with u_n == u_hat_n
    radius: float = 1.0        # rescaling applied before regularizing
    tail_ratio_range: tuple = (math.nan, math.nan)
    checks: dict = field(default_factory=dict)

    def log_A_star(self, n: int) -> float:
        """``log A*_n``."""
        return float(self.u_hat[n]) + math.lgamma(n + 1)

    def A_star(self, n: int) -> mpmath.mpf:
        u = self.u_hat[n]
        return mpmath.exp(mpmath.mpf(u.numerator) / u.denominator + mpmath.loggamma(n + 1))

    def summary(self) -> dict:
        return {"n_range": [self.ns[0], self.ns[-1]], "contact": list(self.contact),
                "radius": self.radius, "tail_ratio_range": list(self.tail_ratio_range),
                "checks": dict(self.checks),
                "note": "contact set is finite; statistics over it proxy the infinite index set"}


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def upper_hull(points: Sequence[tuple]) -> list[tuple]:
    """Upper hull of points sorted by abscissa; collinear points are kept."""
    hull: list[tuple] = []
    for p in points:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) > 0:
            hull.pop()
        hull.append(p)
    return hull


def _interpolate(hull: list[tuple], n: int) -> Fraction:
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        if x0 <= n <= x1:
            return y0 + (y1 - y0) * Fraction(n - x0, x1 - x0)
    if hull and hull[0][0] == n:
        return hull[0][1]
    raise ValueError(f"index {n} outside the hull range")


def regularize(A: Sequence, n_offset: int = 0, radius: float | None = None,
               tail_fraction: float = 0.25) -> RegularizedSequence:
    """Least log-concave (after the ``n!`` shift) majorant of ``|A_n|``.

    ``A[i]`` belongs to ``n = n_offset + i``. When ``radius`` is given the data
    are first rescaled by ``radius**n`` so that their root growth is 1.
    Zero entries are skipped. Properties ii)-iv) hold by construction and are
    asserted; i) is measured over the last ``tail_fraction`` of the range and
    reported in ``tail_ratio_range``.
    """
    shift = math.log(radius) if radius else 0.0
    u: dict[int, Fraction] = {}
    for i, a in enumerate(A):
        n = n_offset + i
        if not a:
            continue
        val = mp_log_abs(a) + n * shift - math.lgamma(n + 1)
        u[n] = Fraction(val)
    if len(u) < 3:
        raise ValueError("regularize needs at least 3 nonzero entries")
    pts = sorted(u.items())
    hull = upper_hull(pts)
    ns = tuple(range(pts[0][0], pts[-1][0] + 1))
    u_hat = {n: _interpolate(hull, n) for n in ns}
    contact = tuple(n for n in ns if n in u and u[n] == u_hat[n])

    second = [u_hat[n - 1] - 2 * u_hat[n] + u_hat[n + 1] for n in ns[1:-1]]
    checks = {
        "ii_concave": all(s <= 0 for s in second),
        "iii_majorant": all(u[n] <= u_hat[n] for n in u),
        "iv_contact": bool(contact) and all(u[n] == u_hat[n] for n in contact),
    }
    if not all(checks.values()):
        raise AssertionError(f"regularization invariants failed: {checks}")

    k = max(2, int(len(ns) * tail_fraction))
    tail = ns[-k:]
    ratios = [math.exp(float(u_hat[n] - u_hat[n + 1])) / (n + 1) for n in tail[:-1]]
    rng = (min(ratios), max(ratios)) if ratios else (math.nan, math.nan)
    checks["i_tail_ratio_min"] = rng[0]
    checks["i_tail_ratio_max"] = rng[1]
    return RegularizedSequence(ns, u, u_hat, contact, radius or 1.0, rng, checks)
