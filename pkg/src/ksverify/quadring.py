"""Exact arithmetic in the ring Z[√2] of numbers a + b√2 with integer a, b."""
from __future__ import annotations

from dataclasses import dataclass

INT_MIN = -(2**31)
INT_MAX = 2**31 - 1


class QuadOverflowError(OverflowError):
    pass


class NotDivisibleError(ValueError):
    pass


def _checked(value: int, op: str) -> int:
    if not INT_MIN <= value <= INT_MAX:
        raise QuadOverflowError(f"{op}: coefficient {value} outside 32-bit range")
    return value


@dataclass(frozen=True, order=False)
class QuadInt:
    """The number ``a + b*sqrt(2)``.

    Coefficients are kept inside the signed 32-bit range; any operation that
    would leave it raises :class:`QuadOverflowError` instead of wrapping.
    """

    a: int
    b: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.a, int) or not isinstance(self.b, int):
            raise TypeError("QuadInt coefficients must be integers")
        _checked(self.a, "QuadInt")
        _checked(self.b, "QuadInt")

    def __add__(self, other: QuadInt | int) -> QuadInt:
        return q_add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other: QuadInt | int) -> QuadInt:
        return q_add(self, q_neg(_coerce(other)))

    def __mul__(self, other: QuadInt | int) -> QuadInt:
        return q_mul(self, _coerce(other))

    __rmul__ = __mul__

    def __neg__(self) -> QuadInt:
        return q_neg(self)

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __float__(self) -> float:
        return self.a + self.b * 2**0.5

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return {1: "√2", -1: "-√2"}.get(self.b, f"{self.b}√2")
        return f"{self.a}{self.b:+d}√2"

    def to_list(self) -> list[int]:
        return [self.a, self.b]

    @classmethod
    def from_list(cls, pair) -> QuadInt:
        a, b = pair
        return cls(int(a), int(b))


ZERO = QuadInt(0, 0)
ONE = QuadInt(1, 0)
SQRT2 = QuadInt(0, 1)


def _coerce(x: QuadInt | int) -> QuadInt:
    if isinstance(x, QuadInt):
        return x
    if isinstance(x, int):
        return QuadInt(x, 0)
    raise TypeError(f"cannot use {type(x).__name__} as a QuadInt")


def q_add(x: QuadInt, y: QuadInt) -> QuadInt:
    return QuadInt(_checked(x.a + y.a, "q_add"), _checked(x.b + y.b, "q_add"))


def q_neg(x: QuadInt) -> QuadInt:
    return QuadInt(_checked(-x.a, "q_neg"), _checked(-x.b, "q_neg"))


def q_mul(x: QuadInt, y: QuadInt) -> QuadInt:
    # (a + b√2)(c + d√2) = (ac + 2bd) + (ad + bc)√2
    a = _checked(x.a * y.a + 2 * x.b * y.b, "q_mul")
    b = _checked(x.a * y.b + x.b * y.a, "q_mul")
    return QuadInt(a, b)


def _sign(n: int) -> int:
    return (n > 0) - (n < 0)


def q_sign(x: QuadInt) -> int:
    """Sign of ``a + b√2`` without floating point."""
    sa, sb = _sign(x.a), _sign(x.b)
    if sa == sb or sb == 0:
        return sa
    if sa == 0:
        return sb
    # opposite signs: the larger of a² and 2b² wins
    return sa if x.a * x.a > 2 * x.b * x.b else sb


def q_div_sqrt2(x: QuadInt) -> QuadInt:
    """Return ``x / √2``; requires the rational part to be even."""
    if x.a % 2:
        raise NotDivisibleError(f"{x} is not divisible by √2")
    return QuadInt(x.b, x.a // 2)
