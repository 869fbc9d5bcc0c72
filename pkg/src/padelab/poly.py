"""Polynomials over the exact or float backend, roots and normalizations."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .scalar import Backend, QQi, coerce, half_tol, to_mpc


@dataclass(frozen=True)
class Polynomial:
    """Coefficients in ascending degree; the leading one is nonzero."""

    coeffs: tuple
    backend: Backend = Backend.EXACT

    def __post_init__(self):
        cs = [coerce(c, self.backend) for c in self.coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # constructors
    @classmethod
    def zero(cls, backend=Backend.EXACT) -> "Polynomial":
        return cls((), backend)

    @classmethod
    def one(cls, backend=Backend.EXACT) -> "Polynomial":
        return cls((1,), backend)

    @classmethod
    def monomial(cls, k: int, c=1, backend=Backend.EXACT) -> "Polynomial":
        return cls((0,) * k + (c,), backend)

    @classmethod
    def from_roots(cls, roots: Iterable, backend=Backend.FLOAT) -> "Polynomial":
        p = cls.one(backend)
        for r in roots:
            p = p * cls((-r, 1), backend)
        return p

    # basic queries
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return coerce(0, self.backend)

    def valuation(self) -> int:
        """Order of the zero at the origin (-1 for the zero polynomial)."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return -1

    def __call__(self, z):
        if self.backend == Backend.EXACT and isinstance(z, (QQi, int, Fraction)):
            acc = QQi(0)
            for c in reversed(self.coeffs):
                acc = acc * z + c
            return acc
        z = to_mpc(z)
        acc = mpmath.mpc(0)
        for c in reversed(self.coeffs):
            acc = acc * z + to_mpc(c)
        return acc

    def __repr__(self):
        return f"Polynomial({[str(c) for c in self.coeffs]}, {self.backend.value})"

    # arithmetic
    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.backend != self.backend:
                raise ValueError("mixed polynomial backends")
            return other
        return Polynomial((other,), self.backend)

    def __add__(self, other):
        o = self._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return Polynomial(tuple(self.coeff(k) + o.coeff(k) for k in range(n)), self.backend)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(tuple(-c for c in self.coeffs), self.backend)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        o = self._lift(other)
        if self.is_zero() or o.is_zero():
            return Polynomial.zero(self.backend)
        out = [coerce(0, self.backend)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(tuple(out), self.backend)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.backend == other.backend and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.backend, self.coeffs))

    def scale(self, c) -> "Polynomial":
        c = coerce(c, self.backend)
        return Polynomial(tuple(c * x for x in self.coeffs), self.backend)

    def shift(self, k: int) -> "Polynomial":
        """Multiply by ``z**k`` (``k < 0`` drops the low coefficients)."""
        if k >= 0:
            return Polynomial((0,) * k + self.coeffs, self.backend)
        return Polynomial(self.coeffs[-k:], self.backend)

    def truncate(self, deg: int) -> "Polynomial":
        return Polynomial(self.coeffs[: max(deg + 1, 0)], self.backend)

    def divrem(self, d: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        d = self._lift(d)
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = d.degree
        inv = 1 / d.lead
        if len(rem) - 1 < dd:
            return Polynomial.zero(self.backend), self
        quo = [coerce(0, self.backend)] * (len(rem) - dd)
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k] * inv
            quo[k - dd] = c
            if c:
                for j in range(dd + 1):
                    rem[k - dd + j] = rem[k - dd + j] - c * d.coeffs[j]
        return Polynomial(tuple(quo), self.backend), Polynomial(tuple(rem[:dd]), self.backend)

    def __floordiv__(self, d):
        return self.divrem(d)[0]

    def __mod__(self, d):
        return self.divrem(d)[1]

    def monic(self) -> "Polynomial":
        if self.is_zero():
            raise ValueError("zero polynomial cannot be made monic")
        return self.scale(1 / self.lead)

    def derivative(self) -> "Polynomial":
        return Polynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k), self.backend)

    def to_float(self) -> "Polynomial":
        return Polynomial(tuple(to_mpc(c) for c in self.coeffs), Backend.FLOAT)

    def dilate(self, c) -> "Polynomial":
        """``z -> p(c z)``."""
        c = coerce(c, self.backend)
        out, pw = [], coerce(1, self.backend)
        for a in self.coeffs:
            out.append(a * pw)
            pw = pw * c
        return Polynomial(tuple(out), self.backend)


def gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd by the Euclidean algorithm (exact backend only)."""
    if a.backend != Backend.EXACT or b.backend != Backend.EXACT:
        raise ValueError("exact gcd requires the exact backend")
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a.monic()


def l1_norm(p: Polynomial):
    """Sum of coefficient moduli; exact (a Fraction) for real exact coefficients."""
    if p.backend == Backend.EXACT and all(c.is_real() for c in p.coeffs):
        return sum((abs(c.re) for c in p.coeffs), Fraction(0))
    return mpmath.fsum(abs(to_mpc(c)) for c in p.coeffs)


def sup_norm_on_circle(p: Polynomial, radius, grid: int = 256) -> mpmath.mpf:
    """Maximum of ``|p|`` over ``grid`` equispaced points of ``|z| = radius``.

    This is a lower bound of the true supremum.
    """
    if grid < 64:
        raise ValueError("grid must have at least 64 points")
    radius = mpmath.mpf(radius)
    if radius <= 0:
        raise ValueError("radius must be positive")
    if p.is_zero():
        return mpmath.mpf(0)
    pf = p.to_float()
    return max(abs(pf(radius * mpmath.expjpi(mpmath.mpf(2 * k) / grid))) for k in range(grid))


@dataclass(frozen=True)
class RootSet:
    """Distinct roots with multiplicities; ``residual`` bounds ``|p(root)|``."""

    roots: tuple
    residual: float = 0.0

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.roots)

    def points(self) -> list:
        """Roots repeated by multiplicity."""
        return [z for z, m in self.roots for _ in range(m)]

    def __len__(self):
        return len(self.roots)


def _companion_eigenvalues(p: Polynomial) -> list:
    pm = p.to_float().monic()
    d = pm.degree
    if d == 1:
        return [-pm.coeffs[0]]
    if d == 2:
        b, c = pm.coeffs[1], pm.coeffs[0]
        s = mpmath.sqrt(b * b - 4 * c)
        r1 = (-b - s) / 2 if abs(-b - s) >= abs(-b + s) else (-b + s) / 2
        r2 = c / r1 if r1 != 0 else -b - r1
        return [r1, r2]
    m = mpmath.zeros(d, d)
    for i in range(1, d):
        m[i, i - 1] = 1
    for i in range(d):
        m[i, d - 1] = -pm.coeffs[i]
    return list(mpmath.eig(m, left=False, right=False))


def _newton(p: Polynomial, z, steps: int = 60):
    dp = p.derivative()
    target = mpmath.mpf(10) ** (-mpmath.mp.dps + 2)
    best, best_res = z, abs(p(z))
    for _ in range(steps):
        d = dp(z)
        if d == 0:
            break
        step = p(z) / d
        z = z - step
        res = abs(p(z))
        if res < best_res:
            best, best_res = z, res
        if abs(step) <= target * max(1, abs(z)):
            break
    return best


def _simple_roots(p: Polynomial) -> list:
    work = mpmath.mp.dps
    with mpmath.workdps(work + 10):
        approx = _companion_eigenvalues(p)
    with mpmath.workdps(2 * work):
        pf = p.to_float()
        refined = [_newton(pf, mpmath.mpc(z)) for z in approx]
    return [mpmath.mpc(z) for z in refined]


def _squarefree(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Yun's square-free decomposition over the exact backend."""
    out = []
    a = gcd(p, p.derivative())
    b = p // a
    c = p.derivative() // a
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        g = gcd(b, d)
        if g.degree > 0:
            out.append((g, i))
        b = b // g
        c = d // g
        d = c - b.derivative()
        i += 1
    return out


def _cluster(points: list, tol) -> list[tuple]:
    groups: list[list] = []
    for z in points:
        for g in groups:
            if any(abs(z - w) <= tol * max(1, abs(w)) for w in g):
                g.append(z)
                break
        else:
            groups.append([z])
    return [(mpmath.fsum(g) / len(g), len(g)) for g in groups]


def _root_key(item):
    z = item[0]
    return (float(abs(z)), float(z.real), float(z.imag))


def roots(p: Polynomial) -> RootSet:
    """All roots of ``p`` grouped by multiplicity.

    Companion-matrix eigenvalues are refined by Newton steps at twice the
    working precision. Exact inputs are first split square-free, so their
    multiplicities are exact; float inputs are clustered at ``10**(-digits/2)``.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no root set")
    if p.degree == 0:
        return RootSet((), 0.0)
    if p.backend == Backend.EXACT:
        found = []
        for factor, mult in _squarefree(p):
            found.extend((z, mult) for z in _simple_roots(factor))
    else:
        found = _cluster(_simple_roots(p), half_tol())
    found.sort(key=_root_key)
    pf = p.to_float()
    scale = max(abs(c) for c in pf.coeffs)
    worst = max(abs(pf(z)) for z, _ in found) if found else mpmath.mpf(0)
    residual = float(worst)
    if residual < worst:   # round the bound up
        residual = math.nextafter(residual, math.inf)
    return RootSet(tuple(found), residual)


def _in_closed_disk(z) -> bool:
    # roots are floats: one within working accuracy of the circle counts as on it
    return abs(z) <= 1 + half_tol()


def normalize_unit_disk(rs: RootSet) -> Polynomial:
    """``prod (z - r)`` over ``|r| <= 1`` times ``prod (1 - z/r)`` over ``|r| > 1``."""
    p = Polynomial.one(Backend.FLOAT)
    for z, mult in rs.roots:
        z = mpmath.mpc(z)
        factor = Polynomial((-z, 1), Backend.FLOAT) if _in_closed_disk(z) else Polynomial((1, -1 / z), Backend.FLOAT)
        for _ in range(mult):
            p = p * factor
    return p


def unit_disk_constant(rs: RootSet) -> mpmath.mpc:
    """Constant ``c`` with ``normalize_unit_disk(rs) == c * monic``."""
    c = mpmath.mpc(1)
    for z, mult in rs.roots:
        if not _in_closed_disk(z):
            c *= (-1 / mpmath.mpc(z)) ** mult
    return c
