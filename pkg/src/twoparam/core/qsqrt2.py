"""Exact arithmetic in the quadratic field Q(sqrt 2)."""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational

from twoparam.errors import InvalidInputError

__all__ = ["QSqrt2", "SQRT2", "INV_SQRT2", "as_qsqrt2"]

_F0 = Fraction(0)
_PARSE_RE = re.compile(r"^(?P<p>[+-]?\d+(?:/\d+)?)?(?P<q>[+-]?\d+(?:/\d+)?)\*sqrt2$")


class QSqrt2:
    """The number ``p + q*sqrt(2)`` with rational ``p`` and ``q``."""

    __slots__ = ("p", "q")

    def __init__(self, p=0, q=0):
        self.p = p if type(p) is Fraction else Fraction(p)
        self.q = q if type(q) is Fraction else Fraction(q)

    @classmethod
    def _raw(cls, p: Fraction, q: Fraction) -> "QSqrt2":
        out = object.__new__(cls)
        out.p = p
        out.q = q
        return out

    @classmethod
    def parse(cls, text: str) -> "QSqrt2":
        """Inverse of ``str``: accepts ``"p"``, ``"q*sqrt2"`` or ``"p+q*sqrt2"``."""
        s = text.replace(" ", "")
        m = None if "sqrt2" not in s else _PARSE_RE.match(s)
        try:
            if "sqrt2" not in s:
                return cls(Fraction(s))
            if m is not None:
                return cls(Fraction(m["p"] or 0), Fraction(m["q"]))
        except (ValueError, ZeroDivisionError):
            pass
        raise InvalidInputError(f"cannot parse {text!r} as an element of Q(sqrt2)")

    def conjugate(self) -> "QSqrt2":
        return QSqrt2(self.p, -self.q)

    def norm(self) -> Fraction:
        """Field norm ``p^2 - 2 q^2``."""
        return self.p * self.p - 2 * self.q * self.q

    def is_rational(self) -> bool:
        return self.q == 0

    def __add__(self, other):
        o = as_qsqrt2(other)
        if o is NotImplemented:
            return NotImplemented
        if not (o.p or o.q):
            return self
        if not (self.p or self.q):
            return o
        return QSqrt2._raw(self.p + o.p, self.q + o.q)

    __radd__ = __add__

    def __sub__(self, other):
        o = as_qsqrt2(other)
        if o is NotImplemented:
            return NotImplemented
        if not (o.p or o.q):
            return self
        return QSqrt2._raw(self.p - o.p, self.q - o.q)

    def __rsub__(self, other):
        o = as_qsqrt2(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = as_qsqrt2(other)
        if o is NotImplemented:
            return NotImplemented
        if not (self.p or self.q):
            return self
        if not (o.p or o.q):
            return o
        if not self.q and not o.q:
            return QSqrt2._raw(self.p * o.p, _F0)
        return QSqrt2._raw(self.p * o.p + 2 * self.q * o.q, self.p * o.q + self.q * o.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = as_qsqrt2(other)
        if o is NotImplemented:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        c = o.conjugate()
        num = self * c
        return QSqrt2(num.p / n, num.q / n)

    def __rtruediv__(self, other):
        o = as_qsqrt2(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __neg__(self):
        return QSqrt2._raw(-self.p, -self.q)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return 1 / self ** (-n)
        out, base = QSqrt2(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = as_qsqrt2(other)
        if o is NotImplemented:
            return NotImplemented
        return self.p == o.p and self.q == o.q

    def __hash__(self):
        if self.q == 0:
            return hash(self.p)
        return hash((self.p, self.q))

    def __bool__(self):
        return bool(self.p) or bool(self.q)

    def __float__(self):
        return float(self.p) + float(self.q) * math.sqrt(2.0)

    def _sign(self) -> int:
        # sign of p + q*sqrt2 decided exactly
        if self.q == 0:
            return (self.p > 0) - (self.p < 0)
        if self.p == 0:
            return (self.q > 0) - (self.q < 0)
        if (self.p > 0) == (self.q > 0):
            return 1 if self.p > 0 else -1
        # opposite signs: compare p^2 with 2 q^2
        dom = 1 if self.p > 0 else -1
        return dom if self.p * self.p > 2 * self.q * self.q else -dom

    def __lt__(self, other):
        return (self - other)._sign() < 0

    def __le__(self, other):
        return (self - other)._sign() <= 0

    def __gt__(self, other):
        return (self - other)._sign() > 0

    def __ge__(self, other):
        return (self - other)._sign() >= 0

    def __abs__(self):
        return -self if self._sign() < 0 else self

    def __repr__(self):
        return f"QSqrt2({self.p!s}, {self.q!s})"

    def __str__(self):
        if self.q == 0:
            return str(self.p)
        if self.p == 0:
            return f"{self.q}*sqrt2"
        sign = "+" if self.q > 0 else "-"
        return f"{self.p}{sign}{abs(self.q)}*sqrt2"


def as_qsqrt2(x):
    if isinstance(x, QSqrt2):
        return x
    if isinstance(x, (int, Rational)):
        return QSqrt2(x)
    return NotImplemented


SQRT2 = QSqrt2(0, 1)
INV_SQRT2 = QSqrt2(0, Fraction(1, 2))
