"""Scalar backends.

Two coefficient domains are supported:

* ``exact``: Gaussian rationals (:class:`QQi`), arithmetic is error free.
* ``float``: :class:`mpmath.mpc` at the global working precision.

The working precision is a run-wide parameter stored in ``mpmath.mp.dps``.
"""
from __future__ import annotations

import enum
from fractions import Fraction
from numbers import Rational

import mpmath

DEFAULT_DIGITS = 50
MIN_DIGITS = 30


class Backend(str, enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


def set_precision(digits: int) -> None:
    if digits < MIN_DIGITS:
        raise ValueError(f"working precision must be >= {MIN_DIGITS} digits, got {digits}")
    mpmath.mp.dps = int(digits)


def digits() -> int:
    return mpmath.mp.dps


def half_tol() -> mpmath.mpf:
    """``10**(-digits/2)``: root clustering and rank tolerance."""
    return mpmath.mpf(10) ** (-mpmath.mp.dps / 2)


def quarter_tol() -> mpmath.mpf:
    """``10**(-digits/4)``: common-factor tolerance under the float backend."""
    return mpmath.mpf(10) ** (-mpmath.mp.dps / 4)


class QQi:
    """Gaussian rational ``re + im*i`` with :class:`fractions.Fraction` parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, QQi):
            re, im = re.re + 0, re.im + _frac(im)
        self.re = _frac(re)
        self.im = _frac(im)

    # construction helpers
    @classmethod
    def coerce(cls, x) -> "QQi":
        if isinstance(x, QQi):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, mpmath.mpc):
            return cls(Fraction(float(x.real)), Fraction(float(x.imag)))
        if isinstance(x, str):
            return cls(Fraction(x))
        return cls(x)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            o = QQi.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        if not self.im:
            return f"QQi({self.re})"
        return f"QQi({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"

    def _other(self, other):
        if isinstance(other, QQi):
            return other
        if isinstance(other, (int, Fraction)) or isinstance(other, Rational):
            return QQi(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QQi(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QQi(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if not self.im and not o.im:
            return QQi(self.re * o.re)
        return QQi(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self) -> "QQi":
        if not self:
            raise ZeroDivisionError("QQi division by zero")
        if not self.im:
            return QQi(1 / self.re)
        n = self.re * self.re + self.im * self.im
        return QQi(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out, base = QQi(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "QQi":
        return QQi(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return not self.im

    def __abs__(self):
        if not self.im:
            return abs(self.re)
        return mpmath.sqrt(_mpf(self.abs2()))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def to_mpc(self) -> mpmath.mpc:
        return mpmath.mpc(_mpf(self.re), _mpf(self.im))


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def _mpf(q: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / q.denominator


def to_mpc(x) -> mpmath.mpc:
    if isinstance(x, QQi):
        return x.to_mpc()
    if isinstance(x, Fraction):
        return mpmath.mpc(_mpf(x))
    return mpmath.mpc(x)


def coerce(x, backend: Backend):
    """Convert ``x`` into the scalar type of ``backend``.

    Floats entering the exact backend are converted by their exact binary value.
    """
    if backend == Backend.EXACT:
        return QQi.coerce(x)
    if isinstance(x, str):
        return mpmath.mpc(_mpf(Fraction(x)))
    return to_mpc(x)


def modulus(x):
    """``|x|``: a Fraction for exact real scalars, otherwise an mpf."""
    if isinstance(x, QQi):
        return abs(x)
    if isinstance(x, Fraction):
        return abs(x)
    return abs(mpmath.mpc(x))


def backend_of(x) -> Backend:
    return Backend.EXACT if isinstance(x, (QQi, Fraction, int)) else Backend.FLOAT


def mp_log_abs(x) -> float:
    """``log|x|`` as a Python float, safe for values far outside double range."""
    if isinstance(x, QQi):
        if not x.im:
            q = abs(x.re)
            return float(mpmath.log(q.numerator) - mpmath.log(q.denominator))
        q = x.abs2()
        return float((mpmath.log(q.numerator) - mpmath.log(q.denominator)) / 2)
    if isinstance(x, Fraction):
        q = abs(x)
        return float(mpmath.log(q.numerator) - mpmath.log(q.denominator))
    return float(mpmath.log(abs(x)))
