"""Closed intervals with exact rational endpoints."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class RationalInterval:
    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lower", _frac(self.lower))
        object.__setattr__(self, "upper", _frac(self.upper))
        if self.lower > self.upper:
            raise ValueError(f"empty interval [{self.lower}, {self.upper}]")

    @classmethod
    def point(cls, x) -> "RationalInterval":
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def __contains__(self, x) -> bool:
        return self.lower <= x <= self.upper

    def contains_interval(self, other: "RationalInterval") -> bool:
        return self.lower <= other.lower and other.upper <= self.upper

    @staticmethod
    def _lift(x) -> "RationalInterval":
        return x if isinstance(x, RationalInterval) else RationalInterval.point(x)

    def __add__(self, other):
        o = self._lift(other)
        return RationalInterval(self.lower + o.lower, self.upper + o.upper)

    __radd__ = __add__

    def __neg__(self):
        return RationalInterval(-self.upper, -self.lower)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        c = [self.lower * o.lower, self.lower * o.upper, self.upper * o.lower, self.upper * o.upper]
        return RationalInterval(min(c), max(c))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers not supported")
        out = RationalInterval.point(1)
        for _ in range(k):
            out = out * self
        return out

    def certainly_lt(self, x) -> bool:
        return self.upper < x

    def certainly_gt(self, x) -> bool:
        return self.lower > x

    def certainly_ge(self, x) -> bool:
        return self.lower >= x


def sqrt_enclosure(n, width=Fraction(1, 10 ** 12)) -> RationalInterval:
    """Interval [a/D, (a+1)/D] around sqrt(n) for a nonnegative rational n.

    Exact when n is a perfect square; otherwise D is the least power of two
    with 1/D <= width.
    """
    n = _frac(n)
    if n < 0:
        raise ValueError("sqrt of a negative number")
    num, den = n.numerator, n.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return RationalInterval.point(Fraction(rn, rd))
    width = _frac(width)
    scale = 1
    while Fraction(1, scale) > width:
        scale *= 2
    # floor(sqrt(n) * scale) = isqrt(floor(n * scale^2)) up to the rational part
    a = isqrt((num * scale * scale) // den)
    return RationalInterval(Fraction(a, scale), Fraction(a + 1, scale))
