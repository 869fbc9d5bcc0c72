"""Taylor-coefficient providers, the test-function catalog and combinations.

A :class:`PowerSeries` produces coefficients lazily and caches them. Catalog
series also carry a :class:`ClosedForm`, which knows the singularities of the
function exactly and can evaluate it outside the disk of convergence. Sums,
scalings and polynomial combinations of closed-form series keep a closed form;
anything involving a coefficient file does not.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Callable, Sequence

import mpmath

from .poly import Polynomial
from .scalar import Backend, QQi, coerce, to_mpc

INF = float("inf")


class InsufficientCoefficients(ValueError):
    """Raised when a series cannot supply a requested coefficient index."""


# ---------------------------------------------------------------------------
# closed forms

@dataclass(frozen=True)
class LogTerm:
    """``log(1 - z/a)``."""

    a: object

    def coeff(self, n: int):
        if n == 0:
            return 0 * self.a
        return -1 / (n * self.a ** n)

    def value(self, z):
        return mpmath.log(1 - to_mpc(z) / to_mpc(self.a))

    @property
    def singular(self) -> bool:
        return True


@dataclass(frozen=True)
class BinomialTerm:
    """``(1 - z/a)**alpha`` with noninteger rational ``alpha``."""

    a: object
    alpha: Fraction

    def coeff(self, n: int):
        exact = isinstance(self.a, QQi)
        alpha = self.alpha if exact else mpmath.mpf(self.alpha.numerator) / self.alpha.denominator
        c = 1 + 0 * self.a
        for k in range(n):
            c = c * (alpha - k) / (k + 1) * (-1 / self.a)
        return c

    def value(self, z):
        alpha = mpmath.mpf(self.alpha.numerator) / self.alpha.denominator
        return mpmath.power(1 - to_mpc(z) / to_mpc(self.a), alpha)

    @property
    def singular(self) -> bool:
        return True


@dataclass(frozen=True)
class ExpTerm:
    """``exp(c z)``."""

    c: object

    def coeff(self, n: int):
        return self.c ** n / math.factorial(n)

    def value(self, z):
        return mpmath.exp(to_mpc(self.c) * to_mpc(z))

    @property
    def singular(self) -> bool:
        return False


@lru_cache(maxsize=None)
def _term_coeff(term, n: int):
    return term.coeff(n)


def _binom(n: int, k: int) -> int:
    return math.comb(n, k)


@dataclass(frozen=True)
class ClosedForm:
    """``poly + sum_a sum_j c_{a,j}/(a-z)**j + sum_t mult_t(z) * t(z)``.

    ``poles`` maps a location to the tuple ``(c_1, ..., c_tau)``; ``terms`` maps
    a transcendental term to its polynomial multiplier.
    """

    backend: Backend
    poles: tuple = ()          # ((a, (c_1..c_tau)), ...)
    poly: Polynomial = None
    terms: tuple = ()          # ((term, Polynomial), ...)

    def __post_init__(self):
        if self.poly is None:
            object.__setattr__(self, "poly", Polynomial.zero(self.backend))
        poles = []
        for a, cs in self.poles:
            cs = list(cs)
            while cs and not cs[-1]:
                cs.pop()
            if cs:
                poles.append((a, tuple(cs)))
        poles.sort(key=lambda item: _loc_key(item[0]))
        object.__setattr__(self, "poles", tuple(poles))
        terms = [(t, m) for t, m in self.terms if not m.is_zero()]
        terms.sort(key=lambda item: repr(item[0]))
        object.__setattr__(self, "terms", tuple(terms))

    # structure
    def is_zero(self) -> bool:
        return not self.poles and self.poly.is_zero() and not self.terms

    def pole_list(self) -> list[tuple]:
        """``[(location, order)]`` sorted by modulus."""
        return [(a, len(cs)) for a, cs in self.poles]

    def branch_points(self) -> list:
        return sorted({t.a for t, _ in self.terms if t.singular}, key=_loc_key)

    def radius(self, m: int) -> float:
        """Radius of the largest disk where the function has at most ``m`` poles."""
        mods = sorted(float(abs(to_mpc(a))) for a, tau in self.pole_list() for _ in range(tau))
        cut = min((float(abs(to_mpc(b))) for b in self.branch_points()), default=INF)
        return min(mods[m] if m < len(mods) else INF, cut)

    # algebra
    def __add__(self, other: "ClosedForm") -> "ClosedForm":
        poles = dict(self.poles)
        for a, cs in other.poles:
            mine = list(poles.get(a, ()))
            mine += [coerce(0, self.backend)] * (len(cs) - len(mine))
            poles[a] = tuple(x + y for x, y in zip(mine, list(cs) + [0] * (len(mine) - len(cs))))
        terms = dict(self.terms)
        for t, mult in other.terms:
            terms[t] = terms[t] + mult if t in terms else mult
        return ClosedForm(self.backend, tuple(poles.items()), self.poly + other.poly, tuple(terms.items()))

    def scale(self, c) -> "ClosedForm":
        c = coerce(c, self.backend)
        return ClosedForm(
            self.backend,
            tuple((a, tuple(c * x for x in cs)) for a, cs in self.poles),
            self.poly.scale(c),
            tuple((t, m.scale(c)) for t, m in self.terms),
        )

    def mul_poly(self, p: Polynomial) -> "ClosedForm":
        """Multiply by a polynomial, re-expanding each pole part around its pole."""
        poly = self.poly * p
        poles = []
        for a, cs in self.poles:
            # p(z) = sum_i b_i (a - z)**i with b_i = (-1)**i p^{(i)}(a)/i!
            b, deriv, fact = [], p, 1
            for i in range(p.degree + 1):
                b.append(deriv(a) * ((-1) ** i) / fact)
                deriv = deriv.derivative()
                fact *= i + 1
            new = [coerce(0, self.backend)] * len(cs)
            for j, cj in enumerate(cs, start=1):
                for i, bi in enumerate(b):
                    if i < j:
                        new[j - i - 1] = new[j - i - 1] + cj * bi
                    else:
                        # (a - z)**(i - j) expanded into powers of z
                        k = i - j
                        expanded = Polynomial(
                            tuple(_binom(k, r) * a ** (k - r) * (-1) ** r for r in range(k + 1)),
                            self.backend,
                        )
                        poly = poly + expanded.scale(cj * bi)
            poles.append((a, tuple(new)))
        terms = tuple((t, m * p) for t, m in self.terms)
        return ClosedForm(self.backend, tuple(poles), poly, terms)

    # evaluation
    def coeff(self, n: int):
        acc = self.poly.coeff(n)
        for a, cs in self.poles:
            base = a ** (-n)
            for j, cj in enumerate(cs, start=1):
                if cj:
                    acc = acc + cj * a ** (-j) * _binom(n + j - 1, j - 1) * base
        for t, mult in self.terms:
            for i, mi in enumerate(mult.coeffs):
                if i > n:
                    break
                if mi:
                    acc = acc + mi * _term_coeff(t, n - i)
        return acc

    def value(self, z) -> mpmath.mpc:
        z = to_mpc(z)
        acc = self.poly.to_float()(z)
        for a, cs in self.poles:
            w = to_mpc(a) - z
            for j, cj in enumerate(cs, start=1):
                acc += to_mpc(cj) / w ** j
        for t, mult in self.terms:
            acc += mult.to_float()(z) * t.value(z)
        return acc


def _loc_key(a):
    z = to_mpc(a)
    return (float(abs(z)), float(z.real), float(z.imag))


# ---------------------------------------------------------------------------
# series

class PowerSeries:
    """Lazy, cached Taylor coefficients ``phi_n``.

    ``length`` bounds the available indices for finite data (coefficient
    files); catalog series are unbounded.
    """

    def __init__(self, provider: Callable[[int], object], backend: Backend = Backend.EXACT,
                 closed_form: ClosedForm | None = None, length: int | None = None, name: str = ""):
        self._provider = provider
        self.backend = Backend(backend)
        self.closed_form = closed_form
        self.length = length
        self.name = name
        self._cache: list = []
        self._lock = threading.Lock()

    @classmethod
    def from_closed_form(cls, cf: ClosedForm, name: str = "") -> "PowerSeries":
        return cls(cf.coeff, cf.backend, closed_form=cf, name=name)

    @classmethod
    def from_coefficients(cls, coeffs: Sequence, backend: Backend = Backend.EXACT, name: str = "") -> "PowerSeries":
        data = tuple(coerce(c, backend) for c in coeffs)
        return cls(data.__getitem__, backend, length=len(data), name=name)

    def __repr__(self):
        return f"PowerSeries({self.name or '<anonymous>'}, {self.backend.value})"

    def available(self, n: int) -> bool:
        return self.length is None or n < self.length

    def coeff(self, n: int):
        if n < 0:
            return coerce(0, self.backend)
        if not self.available(n):
            raise InsufficientCoefficients(f"{self!r} has {self.length} coefficients, index {n} requested")
        if n < len(self._cache):
            return self._cache[n]
        with self._lock:
            while len(self._cache) <= n:
                self._cache.append(coerce(self._provider(len(self._cache)), self.backend))
            return self._cache[n]

    __getitem__ = coeff

    def truncate(self, N: int) -> list:
        """``[phi_0, ..., phi_N]``."""
        return [self.coeff(k) for k in range(N + 1)]

    def radius(self, m: int) -> float | None:
        return None if self.closed_form is None else self.closed_form.radius(m)

    def poles(self) -> list | None:
        return None if self.closed_form is None else self.closed_form.pole_list()

    def value(self, z, terms: int = 400) -> mpmath.mpc:
        """Function value; uses the closed form when known, else a truncated sum."""
        if self.closed_form is not None:
            return self.closed_form.value(z)
        N = terms if self.length is None else min(terms, self.length) - 1
        z = to_mpc(z)
        acc = mpmath.mpc(0)
        for c in reversed(self.truncate(N)):
            acc = acc * z + to_mpc(c)
        return acc


@dataclass(frozen=True)
class SeriesSystem:
    components: tuple
    multi_index: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "multi_index", tuple(int(m) for m in self.multi_index))
        if not self.components:
            raise ValueError("a system needs at least one component")
        if len(self.components) != len(self.multi_index):
            raise ValueError("multi-index length must match the number of components")
        if any(m < 1 for m in self.multi_index):
            raise ValueError("multi-index entries must be positive")
        if len({f.backend for f in self.components}) != 1:
            raise ValueError("system components must share a backend")

    @property
    def d(self) -> int:
        return len(self.components)

    @property
    def size(self) -> int:
        return sum(self.multi_index)

    @property
    def backend(self) -> Backend:
        return self.components[0].backend


@dataclass(frozen=True)
class CombinationSpec:
    """Polynomial multipliers ``p_k`` with ``deg p_k < m_k``."""

    polys: tuple

    def validate(self, system: SeriesSystem) -> None:
        if len(self.polys) != system.d:
            raise ValueError("one multiplier per component is required")
        for p, m in zip(self.polys, system.multi_index):
            if p.degree >= m:
                raise ValueError(f"multiplier of degree {p.degree} violates deg p_k < {m}")
        if all(p.is_zero() for p in self.polys):
            raise ValueError("at least one multiplier must be nonzero")


# ---------------------------------------------------------------------------
# catalog

def _exact_loc(a, backend):
    a = coerce(a, backend)
    if not a:
        raise ValueError("singularity location must be nonzero")
    return a


def catalog_rational(poles: Sequence, poly_part: Polynomial | Sequence = (), backend: Backend = Backend.EXACT,
                     name: str = "") -> PowerSeries:
    """Partial-fraction sum ``poly_part + sum c_j/(a - z)**j``.

    ``poles`` holds ``(a, order, coefficients)`` triples; ``coefficients`` is a
    scalar (used for the top order) or a sequence ``(c_1, ..., c_order)``.
    """
    backend = Backend(backend)
    entries = []
    for a, order, cs in poles:
        a = _exact_loc(a, backend)
        if isinstance(cs, (list, tuple)):
            cs = [coerce(c, backend) for c in cs]
            if len(cs) != order:
                raise ValueError("need one coefficient per order")
        else:
            cs = [coerce(0, backend)] * (order - 1) + [coerce(cs, backend)]
        entries.append((a, tuple(cs)))
    if not isinstance(poly_part, Polynomial):
        poly_part = Polynomial(tuple(poly_part), backend)
    cf = ClosedForm(backend, (), poly_part)
    for a, cs in entries:
        cf = cf + ClosedForm(backend, ((a, cs),))
    return PowerSeries.from_closed_form(cf, name or "rational")


def catalog_log_branch(a, backend: Backend = Backend.EXACT) -> PowerSeries:
    """``log(1 - z/a)``: ``phi_0 = 0``, ``phi_n = -1/(n a**n)``."""
    backend = Backend(backend)
    a = _exact_loc(a, backend)
    cf = ClosedForm(backend, terms=((LogTerm(a), Polynomial.one(backend)),))
    return PowerSeries.from_closed_form(cf, f"log(1-z/{a})")


def catalog_binomial(a, alpha, backend: Backend = Backend.EXACT) -> PowerSeries:
    """``(1 - z/a)**alpha`` for noninteger rational ``alpha``."""
    backend = Backend(backend)
    a = _exact_loc(a, backend)
    alpha = Fraction(alpha)
    if alpha.denominator == 1:
        raise ValueError("alpha must be noninteger")
    cf = ClosedForm(backend, terms=((BinomialTerm(a, alpha), Polynomial.one(backend)),))
    return PowerSeries.from_closed_form(cf, f"(1-z/{a})^{alpha}")


def catalog_entire(c=1, backend: Backend = Backend.EXACT) -> PowerSeries:
    """``exp(c z)``: ``phi_n = c**n / n!``."""
    backend = Backend(backend)
    c = coerce(c, backend)
    cf = ClosedForm(backend, terms=((ExpTerm(c), Polynomial.one(backend)),))
    return PowerSeries.from_closed_form(cf, "exp" if c == 1 else f"exp({c}z)")


CATALOG = {
    "binomial": ("(1 - z/a)**alpha, alpha noninteger rational", ("a", "alpha")),
    "exp": ("exp(c z)", ("c",)),
    "log_branch": ("log(1 - z/a)", ("a",)),
    "rational": ("poly + sum_j c_j/(a - z)**j", ("poles: [[a, order, coeffs]]", "poly")),
}


# ---------------------------------------------------------------------------
# operations

def add(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    if f.backend != g.backend:
        raise ValueError("mixed backends")
    if f.closed_form is not None and g.closed_form is not None:
        return PowerSeries.from_closed_form(f.closed_form + g.closed_form, f"{f.name}+{g.name}")
    length = _min_length(f.length, g.length)
    return PowerSeries(lambda n: f.coeff(n) + g.coeff(n), f.backend, length=length, name=f"{f.name}+{g.name}")


def scale(c, f: PowerSeries) -> PowerSeries:
    c = coerce(c, f.backend)
    if f.closed_form is not None:
        return PowerSeries.from_closed_form(f.closed_form.scale(c), f"{c}*{f.name}")
    return PowerSeries(lambda n: c * f.coeff(n), f.backend, length=f.length, name=f"{c}*{f.name}")


def mul_poly(p: Polynomial, f: PowerSeries) -> PowerSeries:
    if f.closed_form is not None:
        return PowerSeries.from_closed_form(f.closed_form.mul_poly(p), f"p*{f.name}")

    def provider(n):
        acc = coerce(0, f.backend)
        for i, c in enumerate(p.coeffs):
            if i <= n and c:
                acc = acc + c * f.coeff(n - i)
        return acc
    return PowerSeries(provider, f.backend, length=f.length, name=f"p*{f.name}")


def combine(system: SeriesSystem, spec: CombinationSpec) -> PowerSeries:
    """Taylor coefficients of ``sum_k p_k f_k``."""
    spec.validate(system)
    parts = [mul_poly(p, f) for p, f in zip(spec.polys, system.components) if not p.is_zero()]
    out = parts[0]
    for g in parts[1:]:
        out = add(out, g)
    return out


def truncate(f: PowerSeries, N: int) -> list:
    return f.truncate(N)


def _min_length(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


# ---------------------------------------------------------------------------
# coefficient files

def read_coefficient_file(path: str | Path, backend: Backend = Backend.EXACT) -> PowerSeries:
    """Read ``n re im`` lines (decimal or ``p/q``); indices start at 0, contiguous."""
    backend = Backend(backend)
    coeffs = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"{path}:{lineno}: expected 'n re im'")
        n = int(parts[0])
        if n != len(coeffs):
            raise ValueError(f"{path}:{lineno}: index {n} breaks contiguity (expected {len(coeffs)})")
        re, im = Fraction(parts[1]), Fraction(parts[2])
        coeffs.append(QQi(re, im) if backend == Backend.EXACT else mpmath.mpc(_mpf(parts[1]), _mpf(parts[2])))
    if not coeffs:
        raise ValueError(f"{path}: no coefficients")
    return PowerSeries.from_coefficients(coeffs, backend, name=Path(path).name)


def _mpf(s: str):
    if "/" in s:
        q = Fraction(s)
        return mpmath.mpf(q.numerator) / q.denominator
    return mpmath.mpf(s)


def write_coefficient_file(path: str | Path, coeffs: Sequence) -> None:
    lines = []
    for n, c in enumerate(coeffs):
        if isinstance(c, QQi):
            lines.append(f"{n} {c.re} {c.im}")
        else:
            c = to_mpc(c)
            lines.append(f"{n} {mpmath.nstr(c.real, mpmath.mp.dps)} {mpmath.nstr(c.imag, mpmath.mp.dps)}")
    Path(path).write_text("\n".join(lines) + "\n")
