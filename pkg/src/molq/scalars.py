"""Exact scalar fields for subspace computations.

Two fields are supported: the rationals ``Q`` (``fractions.Fraction``) and the
Gaussian rationals ``Q(i)`` (:class:`GaussianRational`). Both carry the
conjugation involution through ``conjugate()`` so that matrix code can be
written once for either field.
"""

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Union

RATIONAL_PATTERN = re.compile(r"^[+-]?\d+(?:/\d+)?$")

# a, a+bi, a-bi, a+i
GAUSSIAN_PATTERN = re.compile(r"^([+-]?\d+(?:/\d+)?)(?:([+-])(\d+(?:/\d+)?)?i)?$")

# bi, -bi, i, -i
IMAGINARY_PATTERN = re.compile(r"^([+-]?)(\d+(?:/\d+)?)?i$")


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"Cannot convert {value!r} to an exact rational")


@dataclass(frozen=True)
class GaussianRational:
    """Exact element re + im*i of Q(i)."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _to_fraction(self.re))
        object.__setattr__(self, "im", _to_fraction(self.im))

    @classmethod
    def _lift(cls, other) -> "GaussianRational":
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, Rational):
            return cls(_to_fraction(other))
        return NotImplemented

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """Return x * conj(x) as a rational."""
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        num = self * other.conjugate()
        return GaussianRational(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, Rational):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        # Agree with Fraction hashing on the real axis.
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"GaussianRational({format_scalar(self)!r})"


Scalar = Union[Fraction, GaussianRational]


class Field(str, Enum):
    """Scalar field tag used by matrices and subspaces."""

    RATIONAL = "Q"
    GAUSSIAN = "Qi"

    @property
    def zero(self) -> Scalar:
        if self is Field.GAUSSIAN:
            return GaussianRational(Fraction(0))
        return Fraction(0)

    @property
    def one(self) -> Scalar:
        if self is Field.GAUSSIAN:
            return GaussianRational(Fraction(1))
        return Fraction(1)

    def coerce(self, value) -> Scalar:
        """Convert ints, Fractions, Gaussian rationals or scalar strings into this field."""
        if isinstance(value, str):
            value = parse_scalar(value, self)
        if self is Field.GAUSSIAN:
            if isinstance(value, GaussianRational):
                return value
            return GaussianRational(_to_fraction(value))
        if isinstance(value, GaussianRational):
            if value.im != 0:
                raise ValueError(f"{format_scalar(value)} is not a rational scalar")
            return value.re
        return _to_fraction(value)

    @classmethod
    def from_tag(cls, tag: str) -> "Field":
        try:
            return cls(tag)
        except ValueError:
            raise ValueError(f"Unknown field tag: {tag!r}. Use 'Q' or 'Qi'.") from None


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ValueError(f"Zero denominator in scalar {text!r}") from None


def parse_scalar(text: str, field: Field = Field.RATIONAL) -> Scalar:
    """Parse the scalar text forms ``p``, ``p/q`` and ``p/q+r/si``.

    Raises:
        ValueError: If the text is malformed or does not belong to ``field``
    """
    cleaned = text.replace(" ", "")
    if RATIONAL_PATTERN.match(cleaned):
        return field.coerce(_parse_fraction(cleaned))

    match = IMAGINARY_PATTERN.match(cleaned)
    if match:
        sign, magnitude = match.groups()
        im = _parse_fraction(magnitude) if magnitude else Fraction(1)
        if sign == "-":
            im = -im
        return field.coerce(GaussianRational(Fraction(0), im))

    match = GAUSSIAN_PATTERN.match(cleaned)
    if match and match.group(2):
        real, sign, magnitude = match.groups()
        im = _parse_fraction(magnitude) if magnitude else Fraction(1)
        if sign == "-":
            im = -im
        return field.coerce(GaussianRational(_parse_fraction(real), im))

    raise ValueError(f"Malformed scalar: {text!r}")


def _format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_scalar(value: Scalar) -> str:
    """Render a scalar in its canonical text form."""
    if not isinstance(value, GaussianRational):
        return _format_fraction(_to_fraction(value))

    if value.im == 0:
        return _format_fraction(value.re)

    magnitude = abs(value.im)
    imaginary = "i" if magnitude == 1 else f"{_format_fraction(magnitude)}i"
    if value.re == 0:
        return imaginary if value.im > 0 else f"-{imaginary}"
    sign = "+" if value.im > 0 else "-"
    return f"{_format_fraction(value.re)}{sign}{imaginary}"
