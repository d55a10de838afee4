"""Elements of PGL2(Q) as normalized integer matrices, and their finite subgroups."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .exprs import ExpressionError, evaluate
from .numth import INFINITY, ExtendedPoint, Infinity, QuadPoint, as_fraction
from .poly import Poly, primitive_part

MAX_GROUP_SIZE = 24

INFINITE_ORDER = math.inf


class SingularMatrixError(ValueError):
    def __init__(self, msg: str = "singular matrix"):
        super().__init__(msg)


class InfiniteGroupError(ValueError):
    pass


class OrbitHitsInfinity(ArithmeticError):
    """A conjugate of the root is sent to infinity; ``dropped`` is the lost degree."""

    def __init__(self, dropped: int, remaining: Poly):
        super().__init__(f"orbit hits infinity (degree drops by {dropped})")
        self.dropped = dropped
        self.remaining = remaining


def _canonical(a: int, b: int, c: int, d: int) -> tuple[int, int, int, int]:
    g = math.gcd(math.gcd(a, b), math.gcd(c, d))
    a, b, c, d = a // g, b // g, c // g, d // g
    first = next(x for x in (a, b, c, d) if x)
    if first < 0:
        a, b, c, d = -a, -b, -c, -d
    return a, b, c, d


@dataclass(frozen=True, order=True)
class MobiusMap:
    """z -> (a z + b)/(c z + d), stored as the canonical integer representative."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        a, b, c, d = (int(v) for v in (self.a, self.b, self.c, self.d))
        if a * d - b * c == 0:
            raise SingularMatrixError()
        for name, v in zip("abcd", _canonical(a, b, c, d)):
            object.__setattr__(self, name, v)

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        return compose(self, other)

    def inverse(self) -> "MobiusMap":
        return inverse(self)

    def is_identity(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def __call__(self, p):
        if isinstance(p, (QuadPoint, Infinity)):
            return apply_point(self, p)
        return self.apply_complex(p)

    def apply_complex(self, z):
        """Numeric image of a finite complex (or mpmath) value; poles give ``inf``."""
        den = self.c * z + self.d
        if den == 0:
            return math.inf
        return (self.a * z + self.b) / den

    def __str__(self) -> str:
        return f"{self.a},{self.b};{self.c},{self.d}"


IDENTITY = MobiusMap(1, 0, 0, 1)


def normalize(a, b, c, d) -> MobiusMap:
    """Canonical integer representative of a rational matrix."""
    fs = [as_fraction(x) for x in (a, b, c, d)]
    lcm = 1
    for x in fs:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    return MobiusMap(*(int(x * lcm) for x in fs))


def parse_matrix(text: str) -> MobiusMap:
    """Parse ``"a,b;c,d"`` with rational entries (e.g. ``"1,5/2;1,-1"``)."""
    rows = text.replace(" ", "").split(";")
    if len(rows) != 2:
        raise ValueError(f"matrix must look like 'a,b;c,d': {text!r}")
    entries = []
    for row in rows:
        cols = row.split(",")
        if len(cols) != 2:
            raise ValueError(f"matrix must look like 'a,b;c,d': {text!r}")
        for col in cols:
            try:
                val = evaluate(col)
            except ExpressionError as exc:
                raise ValueError(f"bad matrix entry {col!r}: {exc}") from None
            if isinstance(val, float):
                raise ValueError(f"matrix entries must be exact rationals: {col!r}")
            entries.append(Fraction(val))
    return normalize(*entries)


def compose(s: MobiusMap, t: MobiusMap) -> MobiusMap:
    """The map z -> s(t(z))."""
    return MobiusMap(
        s.a * t.a + s.b * t.c,
        s.a * t.b + s.b * t.d,
        s.c * t.a + s.d * t.c,
        s.c * t.b + s.d * t.d,
    )


def inverse(s: MobiusMap) -> MobiusMap:
    return MobiusMap(s.d, -s.b, -s.c, s.a)


def power(s: MobiusMap, k: int) -> MobiusMap:
    if k < 0:
        return power(inverse(s), -k)
    out = IDENTITY
    for _ in range(k):
        out = compose(s, out)
    return out


def order(s: MobiusMap) -> int | float:
    """Order of s in PGL2(Q); torsion there only has orders 1, 2, 3, 4 and 6."""
    p = s
    for k in range(1, 7):
        if p.is_identity():
            return k
        p = compose(s, p)
    return INFINITE_ORDER


@dataclass(frozen=True)
class FiniteGroup:
    elements: tuple[MobiusMap, ...]
    generators: tuple[MobiusMap, ...] = field(default=())

    def __iter__(self) -> Iterator[MobiusMap]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, s) -> bool:
        return s in self.elements

    def __str__(self) -> str:
        gens = " ".join(f'"{g}"' for g in self.generators)
        return f"<{gens}> (order {len(self)})"


def generate_group(gens: Iterable[MobiusMap]) -> FiniteGroup:
    gens = tuple(gens)
    elements = {IDENTITY}
    frontier = [IDENTITY]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                e = compose(g, h)
                if e not in elements:
                    elements.add(e)
                    nxt.append(e)
                    if len(elements) > MAX_GROUP_SIZE:
                        raise InfiniteGroupError("group not finite (closure exceeded bound)")
        frontier = nxt
    return FiniteGroup(tuple(sorted(elements)), gens)


def parse_group(text: str | Iterable[str]) -> FiniteGroup:
    """Build a group from generator strings; ``"g1 | g2"`` separates generators in one string."""
    if isinstance(text, str):
        parts = [t for t in text.split("|") if t.strip()]
    else:
        parts = list(text)
    if not parts:
        raise ValueError("no generators given")
    return generate_group(parse_matrix(t) for t in parts)


def apply_point(s: MobiusMap, p: ExtendedPoint) -> ExtendedPoint:
    a, b, c, d = s.entries
    if isinstance(p, Infinity):
        return INFINITY if c == 0 else QuadPoint(Fraction(a, c))
    den = p * c + d
    if den.is_zero():
        return INFINITY
    return (p * a + b) / den


def pullback_minpoly(f: Poly, s: MobiusMap) -> Poly:
    """Primitive minimal polynomial of s^{-1}(alpha) where f(alpha) = 0.

    Computes (c z + d)^n f(s(z)) and normalizes it. Raises
    ``OrbitHitsInfinity`` when the degree drops, i.e. f(a/c) = 0.
    """
    n = f.degree
    if n < 1:
        raise ValueError("pullback needs a polynomial of positive degree")
    a, b, c, d = s.entries
    num = Poly((b, a))
    den = Poly((d, c))
    out = Poly()
    num_pow = [Poly((1,))]
    den_pow = [Poly((1,))]
    for _ in range(n):
        num_pow.append(num_pow[-1] * num)
        den_pow.append(den_pow[-1] * den)
    for k, coeff in enumerate(f.coeffs):
        if coeff:
            out = out + coeff * num_pow[k] * den_pow[n - k]
    if out.degree < n:
        remaining = primitive_part(out) if out.degree >= 1 else Poly((1,))
        raise OrbitHitsInfinity(n - max(out.degree, 0), remaining)
    return primitive_part(out)
