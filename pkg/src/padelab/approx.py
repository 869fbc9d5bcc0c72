"""Padé, type II Hermite-Padé and incomplete Padé approximants.

All three are obtained from the same homogeneous linear system: the
denominator coefficients ``q_0..q_M`` must annihilate the Taylor coefficients
of ``Q f_k`` at indices ``n - m_k + 1 .. n`` for every component ``k``. The
numerators are then truncations of ``Q f_k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence, Union

import mpmath

from .linalg import min_degree_null_vector
from .poly import Polynomial, RootSet, gcd, normalize_unit_disk, roots, unit_disk_constant
from .scalar import Backend, coerce, half_tol, quarter_tol, to_mpc
from .series import InsufficientCoefficients, PowerSeries, SeriesSystem

CHECK_EXTRA = 20


class ConsistencyError(ArithmeticError):
    """A constructed record violates its defining degree or order conditions."""


# ---------------------------------------------------------------------------
# records

@dataclass(frozen=True)
class PadeRecord:
    n: int
    m: int
    Q: Polynomial
    P: Polynomial
    unique: bool
    exact: bool
    lam: int = 0
    residual: float = 0.0

    @cached_property
    def roots(self) -> RootSet:
        return roots(self.Q) if self.Q.degree >= 1 else RootSet(())


@dataclass(frozen=True)
class HermitePadeRecord:
    n: int
    m: tuple
    Q: Polynomial
    P: tuple
    lam: int
    unique: bool
    exact: bool
    nullity: int = 1
    residual: float = 0.0

    @cached_property
    def roots(self) -> RootSet:
        return roots(self.Q) if self.Q.degree >= 1 else RootSet(())


@dataclass(frozen=True)
class PadeRow:
    """Incomplete approximant taken as the Padé approximant ``R_{n,j}``."""

    j: int


@dataclass(frozen=True)
class HPComponent:
    """Incomplete approximant taken as component ``k`` (1-based) of a Hermite-Padé vector."""

    system: SeriesSystem
    k: int


Strategy = Union[PadeRow, HPComponent]


@dataclass(frozen=True)
class IncompleteRecord:
    """``p/q`` with ``q`` in unit-disk form.

    ``q = norm * q_monic`` and ``p = norm * p_monic``; the monic pair keeps the
    backend of the series, so it is exact under the exact backend.
    """

    n: int
    m: int
    m_star: int
    p: Polynomial
    q: Polynomial
    lam: int
    strategy: Strategy
    p_monic: Polynomial
    q_monic: Polynomial
    norm: mpmath.mpc
    roots: RootSet
    residual: float = 0.0


@dataclass(frozen=True)
class TelescopeData:
    """``p_{n+1} q_n - p_n q_{n+1} = A z**power q_star``.

    ``raw_cofactor`` is the same identity for the monic pairs:
    ``p'_{n+1} q'_n - p'_n q'_{n+1} = z**power raw_cofactor`` (exact under the
    exact backend).
    """

    n: int
    A: mpmath.mpc
    q_star: Polynomial
    power: int
    degenerate: bool
    raw_cofactor: Polynomial

    @cached_property
    def q_star_roots(self) -> list:
        if self.q_star.degree < 1:
            return []
        return roots(self.q_star).points()


# ---------------------------------------------------------------------------
# helpers

def _condition_rows(components: Sequence[PowerSeries], budgets: Sequence[int], n: int, qdeg: int) -> list[list]:
    rows = []
    for f, mk in zip(components, budgets):
        for j in range(n - mk + 1, n + 1):
            rows.append([f.coeff(j - i) for i in range(qdeg + 1)])
    return rows


def _times_series(q: Polynomial, f: PowerSeries, lo: int, hi: int) -> list:
    """Coefficients ``lo..hi`` of ``q f``."""
    out = []
    for j in range(lo, hi + 1):
        acc = coerce(0, q.backend)
        for i, c in enumerate(q.coeffs):
            if i <= j and c:
                acc = acc + c * f.coeff(j - i)
        out.append(acc)
    return out


def _truncated_product(q: Polynomial, f: PowerSeries, deg: int) -> Polynomial:
    if deg < 0:
        return Polynomial.zero(q.backend)
    return Polynomial(tuple(_times_series(q, f, 0, deg)), q.backend)


def _need(f: PowerSeries, n: int) -> None:
    if not f.available(n):
        raise InsufficientCoefficients(f"{f!r}: coefficients through index {n} are required")


def _coeff_scale(f: PowerSeries, n: int):
    return max((abs(to_mpc(f.coeff(j))) for j in range(n + 1)), default=mpmath.mpf(0)) or mpmath.mpf(1)


def _is_negligible(x, scale, backend) -> bool:
    if backend == Backend.EXACT:
        return not x
    return abs(to_mpc(x)) <= half_tol() * scale


def _deflate(p: Polynomial, z) -> Polynomial:
    return p.divrem(Polynomial((-coerce(z, p.backend), 1), p.backend))[0]


def cancel_common(q: Polynomial, ps: Sequence[Polynomial]) -> tuple[Polynomial, list[Polynomial], int]:
    """Remove the common factor of ``q`` and all ``ps``.

    Returns the reduced pair and the order of the removed zero at the origin.
    Under the float backend a root ``z`` of ``q`` is common when every ``p``
    is below ``10**(-digits/4)`` there, relative to its coefficient scale.
    """
    ps = list(ps)
    if q.backend == Backend.EXACT:
        g = q
        for p in ps:
            g = gcd(g, p)
            if g.degree == 0:
                break
        if g.degree <= 0:
            return q, ps, 0
        lam = g.valuation()
        return q // g, [p // g for p in ps], lam
    lam = 0
    tol = quarter_tol()
    changed = True
    while changed and q.degree >= 1:
        changed = False
        for z in roots(q).points():
            r = max(1, abs(z))
            if all(p.is_zero() or abs(p(z)) <= tol * sum(abs(to_mpc(c)) for c in p.coeffs) * r ** p.degree
                   for p in ps):
                q = _deflate(q, z)
                ps = [p if p.is_zero() else _deflate(p, z) for p in ps]
                if abs(z) <= tol:
                    lam += 1
                changed = True
                break
    return q, ps, lam


def _solve(components: Sequence[PowerSeries], budgets: Sequence[int], n: int):
    """Min-degree solution: (Q, [P_k], nullity), uncleared."""
    qdeg = sum(budgets)
    backend = components[0].backend
    for f in components:
        _need(f, n)
    rows = _condition_rows(components, budgets, n, qdeg)
    vec, nullity = min_degree_null_vector(rows, qdeg + 1, backend)
    Q = Polynomial(tuple(vec), backend)
    Ps = [_truncated_product(Q, f, n - mk) for f, mk in zip(components, budgets)]
    return Q, Ps, nullity


def _residual_check(Q: Polynomial, P: Polynomial, f: PowerSeries, order: int, extra: int):
    """Max modulus of the first ``order`` coefficients of ``Q f - P`` and the exactness flag."""
    scale = _coeff_scale(f, min(order, f.length - 1) if f.length else order)
    top = order - 1 + extra
    if f.length is not None:
        top = min(top, f.length - 1)
    top = max(top, order - 1)
    diff = _times_series(Q, f, 0, top)
    diff = [d - P.coeff(j) for j, d in enumerate(diff)]
    low = diff[:order]
    res = max((abs(to_mpc(d)) for d in low), default=mpmath.mpf(0))
    if Q.backend == Backend.EXACT:
        ok = all(not d for d in low)
    else:
        ok = res <= half_tol() * scale
    if not ok:
        raise ConsistencyError(f"order conditions fail: residual {mpmath.nstr(res, 5)}")
    exact = all(_is_negligible(d, scale, Q.backend) for d in diff[order:])
    return float(res), exact


def check_order_conditions(Q: Polynomial, f: PowerSeries, n: int, budget: int, lam: int = 0) -> float:
    """Re-validate a stored denominator: coefficients ``n-budget+1 .. n-lam`` of ``Q f`` vanish.

    The numerator is rebuilt as the truncation of ``Q f`` to degree
    ``n - budget``. Returns the residual; raises :class:`ConsistencyError`.
    """
    P = _truncated_product(Q, f, n - budget)
    return _residual_check(Q, P, f, n + 1 - lam, 0)[0]


# ---------------------------------------------------------------------------
# solvers

def pade(f: PowerSeries, n: int, m: int, check_extra: int = CHECK_EXTRA) -> PadeRecord:
    """``R_{n,m}``: ``deg P <= n - m``, ``deg Q <= m``, ``Q f - P = O(z**(n+1))``."""
    if not (n >= m >= 0):
        raise ValueError(f"need n >= m >= 0, got n={n}, m={m}")
    Q, (P,), nullity = _solve([f], [m], n)
    Q, (P,), lam = cancel_common(Q, [P])
    c = 1 / Q.lead
    Q, P = Q.scale(c), P.scale(c)
    residual, exact = _residual_check(Q, P, f, n + 1 - lam, check_extra)
    return PadeRecord(n, m, Q, P, unique=nullity == 1, exact=exact, lam=lam, residual=residual)


def hermite_pade(system: SeriesSystem, n: int, check_extra: int = CHECK_EXTRA) -> HermitePadeRecord:
    """Type II Hermite-Padé approximant with common monic denominator."""
    ms = system.multi_index
    if n < max(ms):
        raise ValueError(f"need n >= max(m) = {max(ms)}, got {n}")
    Q, Ps, nullity = _solve(system.components, ms, n)
    Q, Ps, lam = cancel_common(Q, Ps)
    c = 1 / Q.lead
    Q = Q.scale(c)
    Ps = [P.scale(c) for P in Ps]
    residual, exact = 0.0, True
    for P, f in zip(Ps, system.components):
        r, e = _residual_check(Q, P, f, n + 1 - lam, check_extra)
        residual, exact = max(residual, r), exact and e
    return HermitePadeRecord(n, ms, Q, tuple(Ps), lam, unique=nullity == 1, exact=exact,
                             nullity=nullity, residual=residual)


def incomplete(f: PowerSeries | None, n: int, m: int, m_star: int, strategy: Strategy,
               cancel: bool = True) -> IncompleteRecord:
    """Incomplete Padé approximant of type ``(n, m, m_star)``.

    ``PadeRow(j)`` takes ``R_{n,j}`` (``m_star <= j <= m``); ``HPComponent``
    takes component ``k`` of the Hermite-Padé approximant of the system, which
    requires ``m = |m|`` and ``m_star = m_k``. With ``cancel=False`` the common
    factors of the component and the shared denominator are kept.
    """
    if not (n >= m >= m_star >= 1):
        raise ValueError(f"need n >= m >= m_star >= 1, got ({n}, {m}, {m_star})")
    if isinstance(strategy, PadeRow):
        if not (m_star <= strategy.j <= m):
            raise ValueError(f"pade_row index {strategy.j} outside [{m_star}, {m}]")
        if f is None:
            raise ValueError("pade_row needs a series")
        rec = pade(f, n, strategy.j)
        q, p, lam = rec.Q, rec.P, rec.lam
    elif isinstance(strategy, HPComponent):
        sysm = strategy.system
        if not (1 <= strategy.k <= sysm.d):
            raise ValueError(f"component {strategy.k} outside 1..{sysm.d}")
        comp = sysm.components[strategy.k - 1]
        if f is not None and f is not comp:
            raise ValueError("series does not match the selected system component")
        if m != sysm.size or m_star != sysm.multi_index[strategy.k - 1]:
            raise ValueError("hp_component requires m = |m| and m_star = m_k")
        f = comp
        rec = hermite_pade(sysm, n)
        q, p, lam = rec.Q, rec.P[strategy.k - 1], rec.lam
    else:
        raise TypeError(f"unknown strategy {strategy!r}")
    if cancel:
        q, (p,), extra = cancel_common(q, [p])
        lam += extra
    c = 1 / q.lead
    q, p = q.scale(c), p.scale(c)
    if q.degree > m - lam or (not p.is_zero() and p.degree > n - m_star - lam):
        raise ConsistencyError(f"degree bounds violated at n={n}")
    residual, _ = _residual_check(q, p, f, n + 1 - lam, 0)
    rs = roots(q) if q.degree >= 1 else RootSet(())
    norm = unit_disk_constant(rs)
    return IncompleteRecord(n, m, m_star, p.to_float().scale(norm), q.to_float().scale(norm), lam, strategy,
                            p, q, norm, rs, residual)


def incomplete_row(f: PowerSeries | None, ns: Sequence[int], m: int, m_star: int, strategy: Strategy,
                   cancel: bool = True) -> list[IncompleteRecord]:
    return [incomplete(f, n, m, m_star, strategy, cancel) for n in ns]


def telescope(r_n: IncompleteRecord, r_next: IncompleteRecord) -> TelescopeData:
    """Constant and cofactor of ``r_{n+1} - r_n``."""
    if (r_n.m, r_n.m_star) != (r_next.m, r_next.m_star):
        raise ValueError("records must share (m, m_star)")
    if r_next.n != r_n.n + 1:
        raise ValueError(f"records are not consecutive: n={r_n.n}, {r_next.n}")
    backend = r_n.q_monic.backend
    N = r_next.p_monic * r_n.q_monic - r_n.p_monic * r_next.q_monic
    power = r_n.n + 1 - r_n.lam - r_next.lam
    bound = r_n.m - r_n.m_star
    if backend == Backend.EXACT:
        zero = N.is_zero()
        scale = 1
    else:
        scale = max((abs(c) for c in (r_next.p_monic * r_n.q_monic).coeffs), default=mpmath.mpf(1)) or 1
        zero = all(abs(c) <= half_tol() * scale for c in N.coeffs)
    if zero:
        return TelescopeData(r_n.n, mpmath.mpc(0), Polynomial.one(Backend.FLOAT), power, True,
                             Polynomial.zero(backend))
    low = N.coeffs[:power]
    if any(not _is_negligible(c, scale, backend) for c in low):
        raise ConsistencyError(f"difference numerator not divisible by z^{power} at n={r_n.n}")
    cof = N.shift(-power)
    if backend == Backend.FLOAT:
        cof = Polynomial(tuple(c if abs(c) > half_tol() * scale else 0 for c in cof.coeffs), backend)
        cof = cof.truncate(bound)
    if cof.degree > bound:
        raise ConsistencyError(f"cofactor degree {cof.degree} exceeds m - m_star = {bound}")
    rs = roots(cof) if cof.degree >= 1 else RootSet(())
    q_star = normalize_unit_disk(rs)
    ext = mpmath.mpc(1)
    for z, mult in rs.roots:
        if abs(z) > 1:
            ext *= (-z) ** mult
    A = r_n.norm * r_next.norm * to_mpc(cof.lead) * ext
    return TelescopeData(r_n.n, A, q_star, power, False, cof)


def telescope_row(records: Sequence[IncompleteRecord]) -> list[TelescopeData]:
    return [telescope(a, b) for a, b in zip(records, records[1:])]
