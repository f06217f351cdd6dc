"""Exact arithmetic in the quadratic field Q(sqrt2).

Every coefficient in the package is a :class:`Scalar` ``a + b*sqrt2`` with
``a`` and ``b`` held as :class:`fractions.Fraction`.  There is no floating
point anywhere except :meth:`Scalar.approx`, which exists for display only.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

__all__ = ["Scalar", "ScalarSyntaxError", "parse_scalar", "as_scalar", "ZERO", "ONE", "SQRT2"]

_F0 = Fraction(0)


class ScalarSyntaxError(ValueError):
    """A scalar literal does not follow the ``p/q[+r/s*sqrt2]`` grammar."""


class Scalar:
    """An element ``rat + sqrt2 * sqrt(2)`` of Q(sqrt2).

    Instances are immutable and hashable; equality is structural, which is
    exact because ``{1, sqrt2}`` is a basis of the field over Q.
    """

    __slots__ = ("rat", "sqrt2")

    def __init__(self, rat=0, sqrt2=0):
        object.__setattr__(self, "rat", Fraction(rat))
        object.__setattr__(self, "sqrt2", Fraction(sqrt2))

    @classmethod
    def _make(cls, rat: Fraction, sqrt2: Fraction) -> "Scalar":
        s = object.__new__(cls)
        object.__setattr__(s, "rat", rat)
        object.__setattr__(s, "sqrt2", sqrt2)
        return s

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def __reduce__(self):
        return (Scalar, (self.rat, self.sqrt2))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Rational)):
                return Scalar._make(self.rat + other, self.sqrt2)
            return NotImplemented
        return Scalar._make(self.rat + other.rat, self.sqrt2 + other.sqrt2)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Rational)):
                return Scalar._make(self.rat - other, self.sqrt2)
            return NotImplemented
        return Scalar._make(self.rat - other.rat, self.sqrt2 - other.sqrt2)

    def __rsub__(self, other):
        if isinstance(other, (int, Rational)):
            return Scalar._make(other - self.rat, -self.sqrt2)
        return NotImplemented

    def __neg__(self):
        return Scalar._make(-self.rat, -self.sqrt2)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Rational)):
                return Scalar._make(self.rat * other, self.sqrt2 * other)
            return NotImplemented
        a, b, c, d = self.rat, self.sqrt2, other.rat, other.sqrt2
        if not b and not d:
            return Scalar._make(a * c, _F0)
        return Scalar._make(a * c + 2 * b * d, a * d + b * c)

    __rmul__ = __mul__

    def conjugate(self) -> "Scalar":
        """Galois conjugate ``rat - sqrt2*sqrt(2)``."""
        return Scalar._make(self.rat, -self.sqrt2)

    def norm(self) -> Fraction:
        """Field norm ``rat**2 - 2*sqrt2**2``; zero only for zero."""
        return self.rat * self.rat - 2 * self.sqrt2 * self.sqrt2

    def inverse(self) -> "Scalar":
        if not self.sqrt2:
            if not self.rat:
                raise ZeroDivisionError("division by zero in Q(sqrt2)")
            return Scalar._make(1 / self.rat, _F0)
        n = self.norm()
        return Scalar._make(self.rat / n, -self.sqrt2 / n)

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Rational)):
                if other == 0:
                    raise ZeroDivisionError("division by zero in Q(sqrt2)")
                return Scalar._make(self.rat / other, self.sqrt2 / other)
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.rat == other.rat and self.sqrt2 == other.sqrt2
        if isinstance(other, (int, Rational)):
            return not self.sqrt2 and self.rat == other
        return NotImplemented

    def __hash__(self):
        if not self.sqrt2:
            return hash(self.rat)
        return hash((self.rat, self.sqrt2))

    def __bool__(self):
        return bool(self.rat) or bool(self.sqrt2)

    def sign(self) -> int:
        """Exact sign of the real number ``rat + sqrt2*sqrt(2)``."""
        a, b = self.rat, self.sqrt2
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare a**2 with 2*b**2
        diff = a * a - 2 * b * b
        if diff == 0:
            return 0
        return sa if diff > 0 else sb

    def __lt__(self, other):
        return (self - as_scalar(other)).sign() < 0

    def __le__(self, other):
        return (self - as_scalar(other)).sign() <= 0

    def __gt__(self, other):
        return (self - as_scalar(other)).sign() > 0

    def __ge__(self, other):
        return (self - as_scalar(other)).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- rendering ----------------------------------------------------------

    def is_rational(self) -> bool:
        return not self.sqrt2

    def approx(self) -> float:
        """Lossy float value, for display only."""
        return float(self.rat) + float(self.sqrt2) * 2 ** 0.5

    def literal(self) -> str:
        """Canonical literal: ``p/q`` or ``p/q+r/s*sqrt2`` (``-`` when negative)."""
        head = _fmt_rat(self.rat)
        if not self.sqrt2:
            return head
        sign = "-" if self.sqrt2 < 0 else "+"
        return f"{head}{sign}{_fmt_rat(abs(self.sqrt2))}*sqrt2"

    __str__ = literal

    def __repr__(self):
        return f"Scalar({self.literal()!r})"


def _fmt_rat(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


ZERO = Scalar._make(_F0, _F0)
ONE = Scalar._make(Fraction(1), _F0)
SQRT2 = Scalar._make(_F0, Fraction(1))

_RAT = r"-?\d+(?:/\d+)?"
_LITERAL = re.compile(rf"^\s*({_RAT})(?:\s*([+-])\s*(\d+(?:/\d+)?)\s*\*\s*sqrt2)?\s*$")


def _parse_rat(text: str, source: str) -> Fraction:
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ScalarSyntaxError(f"zero denominator in scalar literal {source!r}")
    return Fraction(int(num), int(den) if den else 1)


def parse_scalar(text: str) -> Scalar:
    """Parse ``p``, ``p/q``, ``p/q+r/s*sqrt2`` or ``p/q-r/s*sqrt2``.

    >>> parse_scalar("0+1/2*sqrt2") * parse_scalar("0+1/2*sqrt2")
    Scalar('1/2')
    """
    if not isinstance(text, str):
        raise ScalarSyntaxError(f"scalar literal must be a string, got {type(text).__name__}")
    m = _LITERAL.match(text)
    if not m:
        raise ScalarSyntaxError(f"malformed scalar literal {text!r}")
    rat = _parse_rat(m.group(1), text)
    if m.group(2) is None:
        return Scalar._make(rat, _F0)
    s2 = _parse_rat(m.group(3), text)
    return Scalar._make(rat, -s2 if m.group(2) == "-" else s2)


def as_scalar(x) -> Scalar:
    """Coerce ints, Fractions, literals and Scalars to :class:`Scalar`."""
    if isinstance(x, Scalar):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, (int, Rational)):
        return Scalar._make(Fraction(x), _F0)
    raise TypeError(f"cannot convert {type(x).__name__} to Scalar")
