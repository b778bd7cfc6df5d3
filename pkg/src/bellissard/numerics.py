"""Scalar arithmetic under three interchangeable backends.

Values are plain Python objects, so the recursion code is written once and
runs under every backend:

* ``Backend.FLOAT64``      -> :class:`float` (``numpy.float64`` is accepted too)
* ``Backend.BIG_RATIONAL`` -> :class:`fractions.Fraction` (always reduced,
  positive denominator)
* ``Backend.INTERVAL``     -> :class:`Interval` with rational endpoints

Operations never promote across backends; :func:`compare` refuses to order
a float against a fraction.
"""

from __future__ import annotations

import decimal
import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

from .errors import ParseError, UsageError

__all__ = [
    "Backend",
    "Ordering",
    "Interval",
    "Scalar",
    "backend_of",
    "coerce",
    "compare",
    "format_scalar",
    "parse_decimal",
    "to_float",
    "DEFAULT_INTERVAL_PRECISION",
]

DEFAULT_INTERVAL_PRECISION = 128


class Backend(str, enum.Enum):
    FLOAT64 = "float"
    BIG_RATIONAL = "exact"
    INTERVAL = "interval"

    @classmethod
    def parse(cls, name: "str | Backend") -> "Backend":
        if isinstance(name, Backend):
            return name
        try:
            return cls(name)
        except ValueError:
            raise UsageError(f"unknown backend {name!r}; expected float, exact or interval") from None


class Ordering(enum.Enum):
    LT = "LT"
    EQ = "EQ"
    GT = "GT"
    INDETERMINATE = "INDETERMINATE"


def _floor_div(num: int, den: int) -> int:
    return num // den


def _ceil_div(num: int, den: int) -> int:
    return -((-num) // den)


def _round_dyadic(x: Fraction, bits: int, up: bool) -> Fraction:
    """Round ``x`` to a dyadic rational with about ``bits`` significant bits.

    Rounds toward +inf when ``up`` else toward -inf, so the result always
    encloses ``x`` from the requested side.
    """
    if x == 0 or x.denominator.bit_length() + x.numerator.bit_length() <= bits:
        return x
    exponent = abs(x.numerator).bit_length() - x.denominator.bit_length()
    shift = bits - exponent
    num, den = x.numerator, x.denominator
    if shift >= 0:
        num <<= shift
    else:
        den <<= -shift
    m = _ceil_div(num, den) if up else _floor_div(num, den)
    return Fraction(m, 1 << shift) if shift >= 0 else Fraction(m << -shift)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise UsageError(f"interval arithmetic only mixes with exact rationals, not {type(x).__name__}")


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` with rational endpoints.

    Every arithmetic result encloses the exact result for all points of the
    operands. With ``precision`` set, endpoints are rounded outward to that
    many significant bits after each operation, which keeps their size
    bounded on long recursions. ``precision=None`` keeps endpoints exact.
    """

    lo: Fraction
    hi: Fraction
    precision: int | None = DEFAULT_INTERVAL_PRECISION

    def __post_init__(self):
        lo, hi = _as_fraction(self.lo), _as_fraction(self.hi)
        if lo > hi:
            raise UsageError(f"interval endpoints out of order: {lo} > {hi}")
        if self.precision is not None:
            lo = _round_dyadic(lo, self.precision, up=False)
            hi = _round_dyadic(hi, self.precision, up=True)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x, precision: int | None = DEFAULT_INTERVAL_PRECISION) -> "Interval":
        x = _as_fraction(x)
        return cls(x, x, precision)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        x = _as_fraction(x)
        return self.lo <= x <= self.hi

    def _other(self, other) -> "Interval":
        if isinstance(other, Interval):
            return other
        return Interval.point(other, None)

    def _make(self, other: "Interval", lo: Fraction, hi: Fraction) -> "Interval":
        prec = self.precision if self.precision is not None else other.precision
        return Interval(lo, hi, prec)

    def __add__(self, other):
        o = self._other(other)
        return self._make(o, self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return self._make(o, self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return self._other(other) - self

    def __neg__(self):
        return Interval(-self.hi, -self.lo, self.precision)

    def __mul__(self, other):
        o = self._other(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return self._make(o, min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError(f"division by an interval containing zero: {o}")
        inv = Interval(1 / o.hi, 1 / o.lo, o.precision)
        return self * inv

    def __rtruediv__(self, other):
        return self._other(other) / self

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi), self.precision)

    def __str__(self):
        return f"[{format_scalar(self.lo)}, {format_scalar(self.hi)}]"


Scalar = Union[float, Fraction, Interval]

_DECIMAL = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)")


def parse_decimal(text: str) -> Fraction:
    """Parse a finite decimal such as ``"2.1"`` or ``"-0.05"`` exactly.

    >>> parse_decimal("2.1")
    Fraction(21, 10)
    """
    if not isinstance(text, str) or not _DECIMAL.fullmatch(text.strip()):
        raise ParseError(f"not a finite decimal: {text!r}")
    return Fraction(text.strip())


def backend_of(x) -> Backend:
    if isinstance(x, Interval):
        return Backend.INTERVAL
    if isinstance(x, Fraction):
        return Backend.BIG_RATIONAL
    if isinstance(x, float):
        return Backend.FLOAT64
    raise UsageError(f"not a scalar of any backend: {x!r}")


def coerce(x, backend: Backend | str, precision: int | None = DEFAULT_INTERVAL_PRECISION) -> Scalar:
    """Convert ``x`` (str, int, Fraction, float) into a value of ``backend``.

    Strings are read as exact decimals first. A float is only accepted for the
    float backend; exact backends refuse it rather than inherit its rounding.
    """
    backend = Backend.parse(backend)
    if isinstance(x, str):
        x = parse_decimal(x)
    if backend is Backend.FLOAT64:
        if isinstance(x, Interval):
            raise UsageError("cannot demote an interval to float")
        return to_float(x) if isinstance(x, Fraction) else float(x)
    if isinstance(x, float):
        raise UsageError("refusing to build an exact scalar from a float; pass a decimal string")
    if backend is Backend.BIG_RATIONAL:
        if isinstance(x, Interval):
            raise UsageError("cannot collapse an interval to a rational")
        return _as_fraction(x)
    if isinstance(x, Interval):
        return x
    return Interval.point(x, precision)


def compare(a: Scalar, b: Scalar) -> Ordering:
    ba, bb = backend_of(a), backend_of(b)
    if ba is not bb:
        raise UsageError(f"cannot compare {ba.value} with {bb.value} scalars")
    if ba is Backend.INTERVAL:
        if a.hi < b.lo:
            return Ordering.LT
        if a.lo > b.hi:
            return Ordering.GT
        if a.lo == a.hi == b.lo == b.hi:
            return Ordering.EQ
        return Ordering.INDETERMINATE
    if ba is Backend.FLOAT64 and (math.isnan(a) or math.isnan(b)):
        return Ordering.INDETERMINATE
    if a < b:
        return Ordering.LT
    if a > b:
        return Ordering.GT
    return Ordering.EQ


def to_float(a: Scalar) -> float:
    """Nearest float to ``a`` (the midpoint for an interval).

    Raises OverflowError when the magnitude does not fit in a double.
    """
    if isinstance(a, Interval):
        a = a.midpoint
    if isinstance(a, Fraction):
        # Fraction.__float__ rounds correctly and raises OverflowError itself
        return float(a)
    value = float(a)
    if math.isinf(value):
        raise OverflowError("scalar magnitude overflows a double")
    return value


def int_to_str(n: int) -> str:
    """Decimal digits of ``n`` with no interpreter digit limit."""
    if abs(n).bit_length() < 12000:
        return str(n)
    return str(decimal.Decimal(n))


def str_to_int(text: str) -> int:
    text = text.strip()
    if len(text) < 3600:
        return int(text)
    if not re.fullmatch(r"[+-]?\d+", text):
        raise ParseError(f"not an integer: {text[:20]}...")
    with decimal.localcontext() as ctx:
        ctx.prec = len(text) + 1
        return int(decimal.Decimal(text))


def format_scalar(a: Scalar) -> str:
    """Serialized form: ``num/den`` for rationals, shortest round-trip repr for floats."""
    if isinstance(a, Interval):
        return str(a)
    if isinstance(a, Fraction):
        return f"{int_to_str(a.numerator)}/{int_to_str(a.denominator)}"
    return repr(float(a))
