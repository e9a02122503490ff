"""Exact complex-rational arithmetic.

Every coefficient in the symbolic pipeline is a ``Scalar``: a complex number
with rational real and imaginary parts.  Floating point enters only at the
oracle boundary via :meth:`Scalar.to_complex`.
"""

from __future__ import annotations

from fractions import Fraction


def _coerce_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot build an exact rational from {x!r}")


class Scalar:
    """A complex number with exact rational parts. Immutable."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _coerce_fraction(re))
        object.__setattr__(self, "im", _coerce_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @staticmethod
    def of(x) -> "Scalar":
        """Coerce an int, Fraction, string, or Scalar."""
        if isinstance(x, Scalar):
            return x
        return Scalar(_coerce_fraction(x))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = Scalar.of(other)
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = Scalar.of(other)
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return Scalar.of(other) - self

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __mul__(self, other):
        other = Scalar.of(other)
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Scalar.of(other)
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by zero Scalar")
        return Scalar(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def __rtruediv__(self, other):
        return Scalar.of(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("Scalar powers must be integers")
        if n < 0:
            return (ONE / self) ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- predicates and conversions ----------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def scale(self, fr) -> "Scalar":
        """Multiply by an exact rational (fast path used by series code)."""
        fr = _coerce_fraction(fr)
        return Scalar(self.re * fr, self.im * fr)

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    # -- display ------------------------------------------------------------

    def __repr__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)


def rational(p, q=1) -> Scalar:
    return Scalar(Fraction(p, q))


def scalar_from_json(obj) -> Scalar:
    """Parse ``"3/4"``, a number, or ``{"re": ..., "im": ...}``."""
    if isinstance(obj, dict):
        return Scalar(_parse_rat(obj.get("re", 0)), _parse_rat(obj.get("im", 0)))
    return Scalar(_parse_rat(obj))


def scalar_to_json(s: Scalar):
    if s.im == 0:
        return str(s.re)
    return {"re": str(s.re), "im": str(s.im)}


def _parse_rat(x) -> Fraction:
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        if x != int(x):
            raise TypeError(f"non-integral float {x!r} is not exact; use a string 'p/q'")
        return Fraction(int(x))
    raise TypeError(f"cannot parse {x!r} as an exact rational")
