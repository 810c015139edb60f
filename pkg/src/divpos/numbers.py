"""Exact arithmetic in Q and in a single real quadratic field Q(sqrt(d)).

Rationals are plain :class:`fractions.Fraction` values.  :class:`FieldElem`
represents ``a + b*sqrt(d)`` with rational ``a``, ``b`` and a squarefree
radicand ``d >= 2``.  An element with ``b == 0`` carries no radicand and
combines with elements of any field.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Union

Rational = Fraction
Number = Union[int, Fraction, "FieldElem"]


class MixedRadicand(ArithmeticError):
    """Two irrational operands live in different quadratic fields."""


class ParseError(ValueError):
    pass


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return ``(s, d)`` with ``n == s*s*d`` and ``d`` squarefree (n >= 1)."""
    if n < 1:
        raise ValueError("squarefree_decompose needs a positive integer")
    s, d = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1 if p == 2 else 2
    return s, d * n


@lru_cache(maxsize=256)
def is_squarefree(n: int) -> bool:
    return n >= 1 and squarefree_decompose(n)[0] == 1


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


@total_ordering
class FieldElem:
    """The real number ``rational + radical*sqrt(radicand)``."""

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, rational=0, radical=0, radicand: int | None = None):
        a = _as_fraction(rational)
        b = _as_fraction(radical)
        if b:
            if radicand is None:
                raise ValueError("an irrational element needs a radicand")
            if radicand < 2 or not is_squarefree(radicand):
                raise ValueError(f"radicand must be squarefree and >= 2, got {radicand}")
        else:
            radicand = None
        self._a = a
        self._b = b
        self._d = radicand

    @classmethod
    def sqrt(cls, q) -> FieldElem:
        """Exact square root of a nonnegative rational, rational when possible."""
        q = _as_fraction(q)
        if q < 0:
            raise ValueError("square root of a negative rational")
        if q == 0:
            return cls(0)
        # sqrt(n/m) = sqrt(n*m)/m
        s, d = squarefree_decompose(q.numerator * q.denominator)
        coeff = Fraction(s, q.denominator)
        if d == 1:
            return cls(coeff)
        return cls(0, coeff, d)

    @property
    def rational_part(self) -> Fraction:
        return self._a

    @property
    def radical_part(self) -> Fraction:
        return self._b

    @property
    def radicand(self) -> int | None:
        return self._d

    def is_rational(self) -> bool:
        return self._b == 0

    def to_fraction(self) -> Fraction:
        if self._b:
            raise ValueError(f"{self} is irrational")
        return self._a

    # -- arithmetic ---------------------------------------------------------

    def _common(self, other) -> tuple[FieldElem, int | None]:
        if not isinstance(other, FieldElem):
            other = FieldElem(_as_fraction(other))
        d1, d2 = self._d, other._d
        if d1 is not None and d2 is not None and d1 != d2:
            raise MixedRadicand(f"sqrt({d1}) and sqrt({d2}) in one expression")
        return other, d1 if d1 is not None else d2

    def __add__(self, other):
        if not isinstance(other, (FieldElem, int, Fraction)):
            return NotImplemented
        other, d = self._common(other)
        return FieldElem(self._a + other._a, self._b + other._b, d)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(-self._a, -self._b, self._d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, (FieldElem, int, Fraction)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if not isinstance(other, (FieldElem, int, Fraction)):
            return NotImplemented
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, (FieldElem, int, Fraction)):
            return NotImplemented
        other, d = self._common(other)
        a1, b1, a2, b2 = self._a, self._b, other._a, other._b
        dd = d if d is not None else 0
        return FieldElem(a1 * a2 + dd * b1 * b2, a1 * b2 + a2 * b1, d)

    __rmul__ = __mul__

    def conjugate(self) -> FieldElem:
        return FieldElem(self._a, -self._b, self._d)

    def norm(self) -> Fraction:
        """``a^2 - d*b^2``, the product with the conjugate."""
        d = self._d or 0
        return self._a * self._a - d * self._b * self._b

    def inverse(self) -> FieldElem:
        n = self.norm()
        if n == 0:
            # the norm vanishes only at zero since d is not a square
            raise ZeroDivisionError("division by zero in Q(sqrt(d))")
        c = self.conjugate()
        return FieldElem(c._a / n, c._b / n, c._d)

    def __truediv__(self, other):
        if not isinstance(other, (FieldElem, int, Fraction)):
            return NotImplemented
        other, _ = self._common(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return FieldElem(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = FieldElem(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- ordering -----------------------------------------------------------

    def sign(self) -> int:
        a, b = self._a, self._b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: |a| vs |b|*sqrt(d)
        lhs, rhs = a * a, self._d * b * b
        if lhs > rhs:
            return sa
        return sb  # lhs == rhs is impossible for squarefree d >= 2

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return (self._a, self._b, self._d) == (other._a, other._b, other._d)
        if isinstance(other, (int, Fraction)):
            return self._b == 0 and self._a == other
        return NotImplemented

    def __lt__(self, other):
        if not isinstance(other, (FieldElem, int, Fraction)):
            return NotImplemented
        return (self - other).sign() < 0

    def __hash__(self):
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b, self._d))

    def __bool__(self):
        return bool(self._a) or bool(self._b)

    def __float__(self):
        if self._b == 0:
            return float(self._a)
        return float(self._a) + float(self._b) * math.sqrt(self._d)

    def floor(self) -> int:
        """Exact floor of the real value."""
        if self._b == 0:
            return math.floor(self._a)
        den = math.lcm(self._a.denominator, self._b.denominator)
        A = self._a.numerator * (den // self._a.denominator)
        B = self._b.numerator * (den // self._b.denominator)
        root = math.isqrt(B * B * self._d)
        guess = (A + (root if B > 0 else -root)) // den
        while self < guess:
            guess -= 1
        while self >= guess + 1:
            guess += 1
        return guess

    # -- text ---------------------------------------------------------------

    def __str__(self):
        return format_field(self)

    def __repr__(self):
        return f"FieldElem({format_field(self)!r})"


def sign(x: Number) -> int:
    if isinstance(x, FieldElem):
        return x.sign()
    return (x > 0) - (x < 0)


def as_field(x: Number) -> FieldElem:
    if isinstance(x, FieldElem):
        return x
    return FieldElem(_as_fraction(x))


def rational_decompose(x: Number) -> tuple[Fraction, Fraction]:
    x = as_field(x)
    return x.rational_part, x.radical_part


def is_rational(x: Number) -> bool:
    return not isinstance(x, FieldElem) or x.is_rational()


def to_fraction(x: Number) -> Fraction:
    if isinstance(x, FieldElem):
        return x.to_fraction()
    return _as_fraction(x)


def continued_fraction_approx(x: Number, slack: Number) -> Fraction:
    """First continued-fraction convergent ``q`` of ``x`` with ``|q - x| < slack``.

    Rational inputs are returned unchanged.
    """
    if sign(slack) <= 0:
        raise ValueError("slack must be positive")
    x = as_field(x)
    if x.is_rational():
        return x.rational_part
    # h_{n} = a_n h_{n-1} + h_{n-2}, same for k
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    rest = x
    while True:
        a = rest.floor()
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        q = Fraction(h, k)
        if abs(x - q) < slack:
            return q
        # rest - a is never zero for an irrational x
        rest = 1 / (rest - a)


def convergents(x: Number, count: int) -> list[Fraction]:
    """The first ``count`` convergents of ``x`` (fewer if ``x`` is rational)."""
    x = as_field(x)
    out: list[Fraction] = []
    h_prev, h, k_prev, k = 0, 1, 1, 0
    rest = x
    for _ in range(count):
        a = rest.floor()
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        out.append(Fraction(h, k))
        frac = rest - a
        if not frac:
            break
        rest = 1 / frac
    return out


# -- text form ----------------------------------------------------------------

_RAT = r"[+-]?\d+(?:/\d+)?"
_RAT_RE = re.compile(rf"^{_RAT}$")
_FIELD_RE = re.compile(
    rf"^(?:(?P<a>{_RAT})(?P<op>[+-]))?(?P<bsign>[+-])?"
    r"(?:(?P<coef>\d+(?:/\d+)?)\*)?sqrt\((?P<d>\d+)\)$"
)


def _fraction(s: str, text: str) -> Fraction:
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {text!r}") from None


def parse_rational(text: str) -> Fraction:
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    s = text.replace(" ", "")
    if not _RAT_RE.match(s):
        raise ParseError(f"not a rational: {text!r}")
    return _fraction(s, text)


def parse_field(text: str) -> FieldElem:
    """Parse ``"p/q"``, ``"r/s*sqrt(d)"`` or ``"p/q + r/s*sqrt(d)"`` (spaces optional).

    Non-squarefree radicands are reduced, so ``"sqrt(8)"`` reads as ``2*sqrt(2)``.
    """
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    s = text.replace(" ", "")
    if "sqrt" not in s:
        return FieldElem(parse_rational(s))
    m = _FIELD_RE.match(s)
    if not m:
        raise ParseError(f"not a field element: {text!r}")
    a = _fraction(m.group("a"), text) if m.group("a") else Fraction(0)
    coef = _fraction(m.group("coef"), text) if m.group("coef") else Fraction(1)
    if (m.group("op") == "-") != (m.group("bsign") == "-"):
        coef = -coef
    n = int(m.group("d"))
    if n == 0:
        return FieldElem(a)
    sq, d = squarefree_decompose(n)
    if d == 1:
        return FieldElem(a + coef * sq)
    return FieldElem(a, coef * sq, d)


def format_rational(q) -> str:
    return str(_as_fraction(q))


def format_field(x: Number) -> str:
    """Canonical text: ``"a"`` when rational, else ``"a + b*sqrt(d)"`` / ``"a - b*sqrt(d)"``."""
    x = as_field(x)
    if x.is_rational():
        return str(x.rational_part)
    b = x.radical_part
    op = "+" if b > 0 else "-"
    return f"{x.rational_part} {op} {abs(b)}*sqrt({x.radicand})"


def parse_number(text: str) -> Number:
    """Parse to a Fraction when rational, else a FieldElem."""
    x = parse_field(text)
    return x.rational_part if x.is_rational() else x
