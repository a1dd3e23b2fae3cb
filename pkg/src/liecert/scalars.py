"""Exact scalars and the numeric tolerance policy.

Structure constants live in ``Q`` (``gmpy2.mpq``); coordinates of algebra
elements live in :class:`GaussQ`, the field Q(i).  Numeric-mode elements use
plain Python ``complex`` and are compared through a :class:`Tolerance`.
"""
from __future__ import annotations

from dataclasses import dataclass
from numbers import Rational
from typing import Union

import gmpy2

Q = gmpy2.mpq
_mpq_type = type(Q(0))

LOW_CONFIDENCE = "LOW_CONFIDENCE"
BELOW_TOLERANCE = "BELOW_TOLERANCE"


def _q(x) -> gmpy2.mpq:
    if type(x) is _mpq_type:
        return x
    if isinstance(x, float):
        # exact binary value would drag in 2**-52 noise; go through the repr
        return Q(repr(x))
    return Q(x)


class GaussQ:
    """Gaussian rational ``real + imag*i`` with exact ``mpq`` parts."""

    __slots__ = ("real", "imag")

    def __init__(self, real=0, imag=0):
        self.real = _q(real)
        self.imag = _q(imag)

    @classmethod
    def _raw(cls, re, im) -> "GaussQ":
        z = object.__new__(cls)
        z.real = re
        z.imag = im
        return z

    @classmethod
    def coerce(cls, x) -> "GaussQ":
        if isinstance(x, GaussQ):
            return x
        if isinstance(x, complex):
            return cls(x.real, x.imag)
        return cls._raw(_q(x), Q(0))

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, GaussQ):
            return GaussQ._raw(self.real + other.real, self.imag + other.imag)
        if isinstance(other, (int, Rational, _mpq_type)):
            return GaussQ._raw(self.real + other, self.imag)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussQ):
            return GaussQ._raw(self.real - other.real, self.imag - other.imag)
        if isinstance(other, (int, Rational, _mpq_type)):
            return GaussQ._raw(self.real - other, self.imag)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Rational, _mpq_type)):
            return GaussQ._raw(other - self.real, -self.imag)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussQ):
            a, b, c, d = self.real, self.imag, other.real, other.imag
            return GaussQ._raw(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Rational, _mpq_type)):
            return GaussQ._raw(self.real * other, self.imag * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GaussQ):
            c, d = other.real, other.imag
            n = c * c + d * d
            if not n:
                raise ZeroDivisionError("GaussQ division by zero")
            a, b = self.real, self.imag
            return GaussQ._raw((a * c + b * d) / n, (b * c - a * d) / n)
        if isinstance(other, (int, Rational, _mpq_type)):
            if not other:
                raise ZeroDivisionError("GaussQ division by zero")
            return GaussQ._raw(self.real / other, self.imag / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Rational, _mpq_type)):
            return GaussQ.coerce(other) / self
        return NotImplemented

    def __neg__(self):
        return GaussQ._raw(-self.real, -self.imag)

    def __pos__(self):
        return self

    def conjugate(self) -> "GaussQ":
        return GaussQ._raw(self.real, -self.imag)

    def __abs__(self) -> float:
        return abs(complex(self))

    def __complex__(self) -> complex:
        return complex(float(self.real), float(self.imag))

    def __bool__(self) -> bool:
        return bool(self.real) or bool(self.imag)

    def __eq__(self, other):
        if isinstance(other, GaussQ):
            return self.real == other.real and self.imag == other.imag
        if isinstance(other, (int, Rational, _mpq_type)):
            return not self.imag and self.real == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if not self.imag:
            return hash(self.real)
        return hash((self.real, self.imag))

    def __repr__(self):
        return f"GaussQ({self.real}, {self.imag})"

    def __str__(self):
        if not self.imag:
            return str(self.real)
        if not self.real:
            return f"{self.imag}i"
        sign = "+" if self.imag > 0 else "-"
        return f"{self.real}{sign}{abs(self.imag)}i"


I = GaussQ(0, 1)
Scalar = Union[GaussQ, complex]


def re(z):
    """Real part; exact for GaussQ/mpq, float for complex."""
    return z.real


def im(z):
    return z.imag if not isinstance(z, (int, _mpq_type)) else Q(0)


def qstr(x) -> str:
    """Render a rational as ``p/q`` (denominator always present)."""
    x = _q(x)
    return f"{int(x.numerator)}/{int(x.denominator)}"


def encode(z, exact: bool = True):
    """Scalar to JSON-friendly ``[re, im]`` pair."""
    if exact:
        z = GaussQ.coerce(z)
        return [qstr(z.real), qstr(z.imag)]
    z = complex(z)
    return [z.real, z.imag]


def parse_rational(v) -> gmpy2.mpq:
    """Parse an int, ``"p/q"`` / decimal string, or decimal float exactly."""
    if isinstance(v, bool):
        raise ValueError("boolean is not a number")
    if isinstance(v, (int, float)):
        return _q(v)
    if isinstance(v, str):
        try:
            return Q(v.strip())
        except ValueError:
            raise ValueError(f"not a rational literal: {v!r}") from None
    raise ValueError(f"not a number: {v!r}")


def parse_scalar(v, exact: bool = True):
    """Parse ``[re, im]`` (or a bare real) into GaussQ or complex."""
    if isinstance(v, list):
        if len(v) != 2:
            raise ValueError("complex scalar must be a [re, im] pair")
        re_, im_ = v
    else:
        re_, im_ = v, 0
    if exact:
        return GaussQ(parse_rational(re_), parse_rational(im_))
    return complex(float(parse_rational(re_)), float(parse_rational(im_)))


@dataclass(frozen=True)
class Tolerance:
    """Zero-test policy.

    ``eps=None`` means exact arithmetic: a value is zero iff it is exactly
    zero.  Otherwise ``|z| <= eps * (1 + scale)`` counts as zero, where
    ``scale`` is the sup-norm of the input data; any magnitude within a
    factor ``band`` of that threshold raises a LOW_CONFIDENCE flag.
    """

    eps: float | None = None
    band: float = 1e3

    @property
    def exact(self) -> bool:
        return self.eps is None

    @classmethod
    def parse(cls, v) -> "Tolerance":
        if v is None or v == "exact":
            return cls(None)
        eps = float(v)
        if not eps > 0:
            raise ValueError("tolerance must be positive or 'exact'")
        return cls(eps)

    def threshold(self, scale: float = 0.0) -> float:
        return self.eps * (1.0 + float(scale))

    def is_zero(self, z, scale: float = 0.0, flags: list | None = None, what: str = "") -> bool:
        if self.eps is None:
            return not z
        a = abs(z)
        thr = self.threshold(scale)
        if thr / self.band < a < thr * self.band:
            if flags is not None:
                flags.append(f"{LOW_CONFIDENCE}: {what} |z|={a:.3e} near threshold {thr:.1e}")
        elif a <= thr and a != 0 and flags is not None:
            flags.append(f"{BELOW_TOLERANCE}: {what} |z|={a:.3e} treated as 0")
        return a <= thr

    def compare(self, x, y, scale: float = 0.0, flags: list | None = None, what: str = "") -> int:
        """Sign of ``x - y`` for real values, with tolerance-aware equality."""
        d = x - y
        if self.is_zero(d, scale, flags, what):
            return 0
        return 1 if d > 0 else -1

    def to_json(self):
        return "exact" if self.eps is None else self.eps


EXACT = Tolerance(None)
