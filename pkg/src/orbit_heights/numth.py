"""Exact points of Q, Q(i) and Q(sqrt(-3)), plus the point at infinity."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exprs import ExpressionError, evaluate

ALLOWED_D = (0, -1, -3)


class MixedFieldError(ArithmeticError):
    pass


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational number: {text!r}") from None


@dataclass(frozen=True)
class QuadPoint:
    """The exact number ``a + b*sqrt(d)`` with ``d`` in {0, -1, -3}."""

    a: Fraction
    b: Fraction = Fraction(0)
    d: int = 0

    def __post_init__(self):
        a, b = as_fraction(self.a), as_fraction(self.b)
        d = self.d
        if d not in ALLOWED_D:
            raise ValueError(f"unsupported quadratic field d={d}")
        if d == 0 and b != 0:
            raise ValueError("d = 0 requires b = 0")
        if b == 0:
            d = 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    @classmethod
    def coerce(cls, x) -> "QuadPoint":
        if isinstance(x, QuadPoint):
            return x
        return cls(as_fraction(x))

    def _field(self, other: "QuadPoint") -> int:
        if self.d and other.d and self.d != other.d:
            raise MixedFieldError(f"cannot mix Q(sqrt({self.d})) and Q(sqrt({other.d}))")
        return self.d or other.d

    def __add__(self, other):
        try:
            other = QuadPoint.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._field(other)
        return QuadPoint(self.a + other.a, self.b + other.b, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadPoint(-self.a, -self.b, self.d)

    def __sub__(self, other):
        try:
            other = QuadPoint.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return QuadPoint.coerce(other) - self

    def __mul__(self, other):
        try:
            other = QuadPoint.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._field(other)
        return QuadPoint(
            self.a * other.a + d * self.b * other.b,
            self.a * other.b + self.b * other.a,
            d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadPoint":
        return QuadPoint(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        """Field norm a^2 - d*b^2, which equals |p|^2 for imaginary d."""
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self) -> "QuadPoint":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conjugate()
        return QuadPoint(c.a / n, c.b / n, self.d)

    def __truediv__(self, other):
        try:
            other = QuadPoint.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return QuadPoint.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            k = int(as_fraction(k))
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadPoint(Fraction(1))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def __complex__(self) -> complex:
        if self.d == 0:
            return complex(float(self.a), 0.0)
        return complex(float(self.a), float(self.b) * abs(self.d) ** 0.5)

    def sort_key(self):
        return (0, self.d, self.a, self.b)

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        unit = "i" if self.d == -1 else "sqrt(-3)"
        if self.b == 1:
            bpart = unit
        elif self.b == -1:
            bpart = "-" + unit
        else:
            bpart = f"{self.b}*{unit}"
        if self.a == 0:
            return bpart
        sep = "" if bpart.startswith("-") else "+"
        return f"{self.a}{sep}{bpart}"


class Infinity:
    """The point at infinity of the Riemann sphere (a singleton)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "oo"

    def __reduce__(self):
        return (Infinity, ())

    def sort_key(self):
        return (1, 0, Fraction(0), Fraction(0))


INFINITY = Infinity()

ExtendedPoint = QuadPoint | Infinity

ZERO = QuadPoint(Fraction(0))
ONE = QuadPoint(Fraction(1))
I = QuadPoint(Fraction(0), Fraction(1), -1)
SQRT_M3 = QuadPoint(Fraction(0), Fraction(1), -3)


def omega(sign: int = 1, imag_sign: int = 1) -> QuadPoint:
    """The primitive 3rd/6th root of unity sign/2 + imag_sign*sqrt(-3)/2."""
    return QuadPoint(Fraction(sign, 2), Fraction(imag_sign, 2), -3)


_ROOTS_OF_UNITY = frozenset(
    [ONE, -ONE, I, -I] + [omega(s, t) for s in (1, -1) for t in (1, -1)]
)


def unit_circle_test(p: QuadPoint) -> bool:
    return p.norm() == 1


def is_root_of_unity_quad(p: QuadPoint) -> bool:
    return p in _ROOTS_OF_UNITY


def point_key(p: ExtendedPoint):
    return p.sort_key()


def _sqrt(x):
    x = as_fraction(x) if not isinstance(x, QuadPoint) else x
    if isinstance(x, QuadPoint):
        if not x.is_rational():
            raise ExpressionError("sqrt of a non-rational point")
        x = x.a
    if x == -1:
        return I
    if x == -3:
        return SQRT_M3
    if x >= 0:
        num, den = x.numerator, x.denominator
        rn, rd = _isqrt_exact(num), _isqrt_exact(den)
        if rn is not None and rd is not None:
            return QuadPoint(Fraction(rn, rd))
    raise ExpressionError(f"sqrt({x}) is not in Q, Q(i) or Q(sqrt(-3))")


def _isqrt_exact(n: int):
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None


def _qdiv(a, b):
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return Fraction(a) / b
    return QuadPoint.coerce(a) / b


def parse_point(text: str, names: dict | None = None) -> ExtendedPoint:
    """Parse an exact point such as ``"1/2+1/2*sqrt(-3)"``, ``"(1+2*i)/5"`` or ``"oo"``.

    ``names`` binds extra integer/rational variables (used by table templates).
    """
    t = text.strip()
    if t.lower() in ("oo", "inf", "infinity", "∞"):
        return INFINITY
    try:
        val = evaluate(t, names={"i": I, **(names or {})}, funcs={"sqrt": _sqrt}, div=_qdiv)
    except ExpressionError as exc:
        raise ValueError(str(exc)) from None
    except (MixedFieldError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse point {text!r}: {exc}") from None
    if isinstance(val, float):
        raise ValueError(f"point must be exact: {text!r}")
    return QuadPoint.coerce(val)
