"""Closed real intervals with outward-rounded arithmetic (backed by mpmath.iv)."""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass

import mpmath
from mpmath import iv, mp

DEFAULT_PRECISION = 128


@contextmanager
def ivprec(bits: int):
    old = iv.prec
    iv.prec = max(bits, old)
    try:
        yield
    finally:
        iv.prec = old


def _endpoints(x) -> tuple[mpmath.mpf, mpmath.mpf]:
    lo, hi = x._mpi_
    return mp.make_mpf(lo), mp.make_mpf(hi)


@dataclass(frozen=True)
class Interval:
    lo: mpmath.mpf
    hi: mpmath.mpf
    prec: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, x, prec: int = DEFAULT_PRECISION) -> "Interval":
        with ivprec(prec):
            return cls.from_iv(iv.mpf(x), prec)

    @classmethod
    def from_bounds(cls, lo, hi, prec: int = DEFAULT_PRECISION) -> "Interval":
        with ivprec(prec):
            return cls.from_iv(iv.mpf([lo, hi]), prec)

    @classmethod
    def from_iv(cls, x, prec: int = DEFAULT_PRECISION) -> "Interval":
        lo, hi = _endpoints(x)
        return cls(lo, hi, prec)

    def to_iv(self):
        return iv.mpf([self.lo, self.hi])

    def _binop(self, other, op) -> "Interval":
        prec = self.prec
        with ivprec(prec):
            if isinstance(other, Interval):
                prec = max(prec, other.prec)
                o = other.to_iv()
            else:
                o = iv.mpf(other)
            return Interval.from_iv(op(self.to_iv(), o), prec)

    def __add__(self, other):
        return self._binop(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda x, y: x - y)

    def __mul__(self, other):
        return self._binop(other, lambda x, y: x * y)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, lambda x, y: x / y)

    def __pow__(self, k: int):
        with ivprec(self.prec):
            return Interval.from_iv(self.to_iv() ** k, self.prec)

    def log(self) -> "Interval":
        if self.lo == self.hi == 1:
            return Interval(mpmath.mpf(0), mpmath.mpf(0), self.prec)
        with ivprec(self.prec):
            return Interval.from_iv(iv.log(self.to_iv()), self.prec)

    def exp(self) -> "Interval":
        if self.lo == self.hi == 0:
            return Interval(mpmath.mpf(1), mpmath.mpf(1), self.prec)
        with ivprec(self.prec):
            return Interval.from_iv(iv.exp(self.to_iv()), self.prec)

    @property
    def width(self) -> mpmath.mpf:
        return self.hi - self.lo

    @property
    def mid(self) -> mpmath.mpf:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def __float__(self) -> float:
        return float(self.mid)

    def to_string(self, digits: int = 20) -> str:
        """Decimal midpoint with an explicit +- radius."""
        rad = (self.hi - self.lo) / 2
        return f"{mpmath.nstr(self.mid, digits)} ± {mpmath.nstr(rad, 3)}"

    def __str__(self) -> str:
        return self.to_string()


def parse_interval(text: str, prec: int = DEFAULT_PRECISION) -> Interval:
    """Inverse of ``Interval.to_string`` (the radius is widened to an enclosure)."""
    mid, _, rad = text.partition("±")
    with mpmath.workprec(prec):
        m = mpmath.mpf(mid.strip())
        r = mpmath.mpf(rad.strip()) if rad.strip() else mpmath.mpf(0)
        return Interval.from_bounds(m - r, m + r, prec)
