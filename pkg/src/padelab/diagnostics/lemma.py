"""Numerical witness for the O(1) bounds on incomplete approximants.

Everything is measured in the normalized variable ``w = z / R*``, where the
telescoping constants have root growth 1. ``K`` is given in that variable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import mpmath

from ..scalar import to_mpc
from ..series import PowerSeries
from .regularize import RegularizedSequence

POLE_EXCLUSION = 0.1
GROWTH_FACTOR = 2.0


@dataclass(frozen=True)
class KSpec:
    """Compact set for the interior bound: a circle or a closed disk of radius ``radius``."""

    radius: float
    kind: str = "circle"
    grid: int = 128

    def points(self) -> list:
        if self.radius <= 0:
            raise ValueError("K radius must be positive")
        if self.kind == "circle":
            return [self.radius * mpmath.expjpi(2 * mpmath.mpf(k) / self.grid) for k in range(self.grid)]
        if self.kind == "disk":
            rings = max(2, self.grid // 16)
            pts = []
            for i in range(1, rings + 1):
                r = self.radius * i / rings
                per = max(8, (self.grid * i) // rings)
                pts += [r * mpmath.expjpi(2 * mpmath.mpf(k) / per) for k in range(per)]
            return pts
        raise ValueError(f"unknown K kind {self.kind!r}")


@dataclass(frozen=True)
class LemmaReport:
    ns: tuple
    M8: tuple
    M9: tuple
    sup8: float
    sup9: float
    bounded8: bool
    bounded9: bool
    vacuous: bool = False
    note: str = ""

    @property
    def bounded(self) -> bool:
        return self.bounded8 and self.bounded9

    def summary(self) -> dict:
        return {"vacuous": self.vacuous, "note": self.note, "n": list(self.ns), "M8": list(self.M8),
                "M9": list(self.M9), "sup8": self.sup8, "sup9": self.sup9,
                "bounded8": self.bounded8, "bounded9": self.bounded9}


def _flat(values: Sequence[float]) -> bool:
    """Last-quarter max at most ``GROWTH_FACTOR`` times the first-quarter max."""
    k = max(1, len(values) // 4)
    return max(values[-k:]) <= GROWTH_FACTOR * max(values[:k])


def _remainder(rec, f: PowerSeries, zs: Sequence, fvals: Sequence, guard: int = 10, tries: int = 4) -> list:
    """``|q_n f - p_n|`` at ``zs``, raising precision where cancellation eats the working digits.

    Uses the monic pair (exact under the exact backend) and the stored
    normalization constant, so the escalation is meaningful for exact records.
    """
    base = mpmath.mp.dps
    out = [None] * len(zs)
    todo = list(range(len(zs)))
    dps = base
    for _ in range(tries):
        with mpmath.workdps(dps):
            q, p = rec.q_monic.to_float(), rec.p_monic.to_float()
            worst = 0
            again = []
            for i in todo:
                z = zs[i]
                qf, pz = q(z) * (fvals[i] if dps == base else f.value(z)), p(z)
                r = abs(qf - pz)
                scale = max(abs(qf), abs(pz))
                lost = 0 if r == 0 and scale == 0 else (
                    float(mpmath.log10(scale / r)) if r else float(dps))
                if lost > dps - guard:
                    again.append(i)
                    worst = max(worst, lost)
                out[i] = r
        if not again:
            break
        todo = again
        dps = int(worst) + 2 * guard + base
    norm = abs(rec.norm)
    return [+(r * norm) for r in out]


def _vacuous(note: str) -> LemmaReport:
    return LemmaReport((), (), (), math.nan, math.nan, True, True, True, note)


def lemma_bound_check(records: Sequence, f: PowerSeries, regularized: RegularizedSequence | Callable | None,
                      R_star: float, delta: float, K: KSpec, poles: Sequence | None = None,
                      grid: int = 128, exclusion: float = POLE_EXCLUSION) -> LemmaReport:
    """Compute the two normalized maxima along an incomplete row.

    ``M8(n) = max_{|w|=e^delta} |p_n(R* w)| / (A*_n e^{n delta})`` and
    ``M9(n) = max_{w in K} |(q_n f - p_n)(R* w)| / (A*_n |w|^n)``.
    ``regularized`` may also be a callable ``n -> A*_n`` (used to feed a
    deliberately wrong majorant). ``poles`` are in the ``z`` variable and
    default to the closed-form poles of ``f``.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if regularized is None or not math.isfinite(R_star):
        return _vacuous("telescopes degenerate: no regularizing sequence")
    if isinstance(regularized, RegularizedSequence):
        A_star, covered = regularized.A_star, set(regularized.ns)
    else:
        A_star, covered = regularized, None
    R = mpmath.mpf(R_star)
    kpts = K.points()
    if max(abs(w) for w in kpts) >= math.exp(-delta):
        raise ValueError("K must lie inside |w| < e^-delta")
    if poles is None:
        poles = [a for a, _ in (f.poles() or [])]
    for a in poles:
        a = to_mpc(a)
        if any(abs(R * w - a) < exclusion for w in kpts):
            raise ValueError(f"K meets the {exclusion}-neighborhood of the pole {complex(a)}")
    circle = [math.exp(delta) * mpmath.expjpi(2 * mpmath.mpf(k) / grid) for k in range(grid)]
    zpts = [R * w for w in kpts]
    fvals = [f.value(z) for z in zpts]

    ns, m8, m9 = [], [], []
    for rec in records:
        n = rec.n
        if covered is not None and n not in covered:
            continue
        try:
            a = A_star(n)
        except (KeyError, ValueError):
            continue
        p = rec.p.to_float()
        s8 = max(abs(p(R * w)) for w in circle) / (a * mpmath.exp(n * delta))
        rem = _remainder(rec, f, zpts, fvals)
        s9 = max(r / abs(w) ** n for r, w in zip(rem, kpts)) / a
        ns.append(n)
        m8.append(float(s8))
        m9.append(float(s9))
    if len(ns) < 4:
        return _vacuous("fewer than 4 indices covered by the regularizing sequence")
    return LemmaReport(tuple(ns), tuple(m8), tuple(m9), max(m8), max(m9), _flat(m8), _flat(m9))
