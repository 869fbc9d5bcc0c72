"""Rate and radius estimators.

A limsup cannot be computed from finitely many terms, so every estimate is
reported two ways: the windowed maximum of ``s_n**(1/n)`` over the last
``window`` entries, and ``exp`` of the least-squares slope of ``log s_n``
against ``n`` over the same entries. Acceptance checks use the slope.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from ..poly import Polynomial, l1_norm
from ..scalar import Backend, QQi, mp_log_abs, to_mpc
from ..series import PowerSeries

INF = math.inf
SUPEREXP_DROP = 0.15


class DegenerateHankel(ArithmeticError):
    """Every sampled Hankel determinant vanished; no radius is inferred."""


@dataclass(frozen=True)
class RateEstimate:
    """``per_n`` holds ``(n, log s_n, s_n**(1/n))`` for the nonzero entries."""

    per_n: tuple
    tail_estimate: float
    fit_estimate: float
    window: int
    zero_sentinel: bool = False
    superexponential: bool = False

    @property
    def ns(self) -> list[int]:
        return [n for n, _, _ in self.per_n]

    def summary(self) -> dict:
        return {"tail": self.tail_estimate, "fit": self.fit_estimate, "window": self.window,
                "entries": len(self.per_n), "zero_sentinel": self.zero_sentinel,
                "superexponential": self.superexponential}


def _is_zero(v) -> bool:
    if isinstance(v, (QQi, Fraction, int)):
        return not v
    return v == 0


def _slope(ns, logs) -> float:
    if len(ns) < 2:
        return float("nan")
    return float(np.polyfit(np.asarray(ns, float), np.asarray(logs, float), 1)[0])


def rate_estimate(values: Sequence[tuple], window: int | None = None, floor: float | None = None) -> RateEstimate:
    """Estimate ``limsup s_n**(1/n)`` from ``(n, s_n)`` pairs.

    Zero entries (and, when ``floor`` is given, entries with ``log s_n < floor``)
    are skipped. With no usable entries the zero sentinel is returned.
    """
    per_n = []
    for n, v in values:
        if _is_zero(v) or n <= 0:
            continue
        lg = mp_log_abs(v)
        if floor is not None and lg < floor:
            continue
        per_n.append((n, lg, math.exp(lg / n)))
    if not per_n:
        return RateEstimate((), 0.0, 0.0, 0, zero_sentinel=True)
    w = window if window is not None else max(5, math.ceil(len(per_n) / 2))
    w = min(w, len(per_n))
    tail = per_n[-w:]
    tail_est = max(r for _, _, r in tail)
    ns = [n for n, _, _ in tail]
    logs = [lg for _, lg, _ in tail]
    fit = math.exp(_slope(ns, logs)) if len(tail) >= 2 else tail_est
    superexp = False
    if len(tail) >= 8:
        h = len(tail) // 2
        s1, s2 = _slope(ns[:h], logs[:h]), _slope(ns[h:], logs[h:])
        superexp = s2 < s1 - SUPEREXP_DROP and s2 < 0
    return RateEstimate(tuple(per_n), tail_est, fit, w, superexponential=superexp)


# ---------------------------------------------------------------------------
# theta

def _as_monic(p: Polynomial, backend: Backend) -> Polynomial:
    p = p if p.backend == backend else p.to_float()
    return p.monic()


def theta(Q_seq: Sequence[tuple], Q_limit: Polynomial, window: int | None = None,
          floor: float | None = None) -> RateEstimate:
    """Rate of ``||Q_limit - Q_n||_1`` (both monic) along a row."""
    if len(Q_seq) < 10:
        raise ValueError("theta needs at least 10 entries")
    backend = Q_limit.backend
    if any(Q.backend != backend for _, Q in Q_seq):
        backend = Backend.FLOAT
    limit = _as_monic(Q_limit, backend)
    vals = []
    for n, Q in Q_seq:
        Qm = _as_monic(Q, backend)
        if Qm.degree != limit.degree:
            raise ValueError(f"degree mismatch at n={n}: {Qm.degree} vs {limit.degree}")
        vals.append((n, l1_norm(limit - Qm)))
    return rate_estimate(vals, window, floor)


def approximation_error_rate(f: PowerSeries, records: Sequence, radius, grid: int = 128,
                             window: int | None = None) -> RateEstimate:
    """Rate of ``max_{|z|=radius} |f - P/Q|`` for Padé records (``.P``, ``.Q``)."""
    pts = [mpmath.mpf(radius) * mpmath.expjpi(mpmath.mpf(2 * k) / grid) for k in range(grid)]
    fv = [f.value(z) for z in pts]
    vals = []
    for rec in records:
        P, Q = rec.P.to_float(), rec.Q.to_float()
        err = max(abs(v - P(z) / Q(z)) for z, v in zip(pts, fv))
        vals.append((rec.n, err))
    return rate_estimate(vals, window)


# ---------------------------------------------------------------------------
# R* and Hadamard radii

@dataclass(frozen=True)
class RadiusEstimate:
    fit: float
    tail: float
    rate: RateEstimate | None
    infinite: bool = False

    def summary(self) -> dict:
        return {"fit": self.fit, "tail": self.tail, "infinite": self.infinite,
                "rate": None if self.rate is None else self.rate.summary()}


def _reciprocal(x: float) -> float:
    return INF if x == 0 else 1 / x


def estimate_R_star(telescopes: Sequence, window: int | None = None) -> RadiusEstimate:
    """``1 / limsup |A_n|**(1/n)``; degenerate entries are skipped."""
    if not telescopes:
        raise ValueError("no telescope data")
    tail = telescopes[-max(1, len(telescopes) // 4):]
    if all(t.degenerate for t in tail):
        return RadiusEstimate(INF, INF, None, infinite=True)
    good = [(t.n, t.A) for t in telescopes if not t.degenerate]
    if len(good) < 10:
        raise ValueError(f"need >= 10 nondegenerate telescope entries, got {len(good)}")
    rate = rate_estimate(good, window)
    return RadiusEstimate(_reciprocal(rate.fit_estimate), _reciprocal(rate.tail_estimate), rate)


def _det(rows: list[list], backend: Backend):
    if backend == Backend.EXACT:
        m = [list(r) for r in rows]
        n = len(m)
        det = QQi(1)
        for c in range(n):
            piv = next((i for i in range(c, n) if m[i][c]), None)
            if piv is None:
                return QQi(0)
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                det = -det
            det = det * m[c][c]
            inv = 1 / m[c][c]
            for i in range(c + 1, n):
                if m[i][c]:
                    fct = m[i][c] * inv
                    m[i] = [a - fct * b for a, b in zip(m[i], m[c])]
        return det
    return mpmath.det(mpmath.matrix([[to_mpc(x) for x in r] for r in rows]))


def hankel_determinants(f: PowerSeries, m: int, N: int) -> list[tuple]:
    """``(n, det[phi_{n+i+j}]_{i,j=0..m})`` for ``n = 1..N``."""
    out = []
    for n in range(1, N + 1):
        rows = [[f.coeff(n + i + j) for j in range(m + 1)] for i in range(m + 1)]
        out.append((n, _det(rows, f.backend)))
    return out


def _ell(f: PowerSeries, m: int, N: int, window, floor):
    """``limsup |D_m(n)|**(1/n)`` as an estimate; 0 signals superexponential decay."""
    vals = hankel_determinants(f, m, N)
    if all(_is_zero(v) for _, v in vals):
        raise DegenerateHankel(f"all Hankel determinants of order {m + 1} vanish up to n={N}")
    tail = vals[-max(2, len(vals) // 4):]
    if all(_is_zero(v) for _, v in tail):
        return 0.0, 0.0, None
    rate = rate_estimate(vals, window, floor)
    if rate.superexponential:
        return 0.0, 0.0, rate
    return rate.fit_estimate, rate.tail_estimate, rate


def hadamard_radius(f: PowerSeries, m: int, N: int = 60, window: int | None = None) -> RadiusEstimate:
    """``R_m = l_{m-1} / l_m`` with ``l_m = limsup |det[phi_{n+i+j}]|**(1/n)``, ``l_{-1} = 1``.

    Needs coefficients through ``N + 2m``.
    """
    if not f.available(N + 2 * m):
        raise ValueError(f"hadamard_radius needs coefficients through {N + 2 * m}")
    floor = None
    if f.backend == Backend.FLOAT:
        scale = max(abs(to_mpc(f.coeff(k))) for k in range(N + 2 * m + 1))
        floor = float((m + 1) * (mpmath.log(scale) if scale else 0) - mpmath.mp.dps * mpmath.log(10) * 0.9)
    lo_fit, lo_tail = 1.0, 1.0
    if m > 0:
        lo_fit, lo_tail, _ = _ell(f, m - 1, N, window, floor)
    hi_fit, hi_tail, rate = _ell(f, m, N, window, floor)
    if lo_fit == 0.0:
        return RadiusEstimate(INF, INF, rate, infinite=True)
    if hi_fit == 0.0:
        return RadiusEstimate(INF, INF, rate, infinite=True)
    return RadiusEstimate(lo_fit / hi_fit, lo_tail / hi_tail, rate)


# ---------------------------------------------------------------------------
# Fabry

@dataclass(frozen=True)
class FabryResult:
    ratios: tuple            # (n, phi_n/phi_{n+1} or None)
    verdict: str             # "limit" | "divergent" | "none"
    limit: mpmath.mpc | None
    undefined: tuple = ()    # indices with phi_{n+1} = 0

    @property
    def R0(self) -> float | None:
        if self.verdict == "limit":
            return float(abs(self.limit))
        if self.verdict == "divergent":
            return INF
        return None

    def summary(self) -> dict:
        lim = None if self.limit is None else [float(self.limit.real), float(self.limit.imag)]
        return {"verdict": self.verdict, "limit": lim, "undefined": list(self.undefined)}


def fabry(f: PowerSeries, N: int = 60, tol: float = 1e-6) -> FabryResult:
    """Ratios ``phi_n / phi_{n+1}`` for ``n < N`` and a Cauchy-tail verdict."""
    if N < 10:
        raise ValueError("fabry needs N >= 10")
    ratios, undefined = [], []
    for n in range(N):
        a, b = f.coeff(n), f.coeff(n + 1)
        if _is_zero(b):
            ratios.append((n, None))
            undefined.append(n)
        else:
            ratios.append((n, to_mpc(a) / to_mpc(b)))
    tail = ratios[-max(3, N // 4):]
    if any(r is None for _, r in tail):
        return FabryResult(tuple(ratios), "none", None, tuple(undefined))
    vals = [r for _, r in tail]
    last = vals[-1]
    spread = max(abs(v - last) for v in vals)
    if spread <= tol * max(1, abs(last)):
        return FabryResult(tuple(ratios), "limit", last, tuple(undefined))
    mods = [abs(v) for v in vals]
    incs = [b - a for a, b in zip(mods, mods[1:])]
    if all(d > 0 for d in incs) and incs[-1] >= 0.5 * incs[0]:
        return FabryResult(tuple(ratios), "divergent", None, tuple(undefined))
    return FabryResult(tuple(ratios), "none", None, tuple(undefined))
