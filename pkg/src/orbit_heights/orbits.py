"""Orbits of the special points and the orbit set O of a finite group."""

from __future__ import annotations

from dataclasses import dataclass

from .heights import orbit_height
from .intervals import DEFAULT_PRECISION, Interval
from .mobius import FiniteGroup, MobiusMap, apply_point
from .numth import (
    I,
    ONE,
    ZERO,
    ExtendedPoint,
    Infinity,
    QuadPoint,
    is_root_of_unity_quad,
    omega,
    point_key,
    unit_circle_test,
)
from .poly import Poly, cyclotomic


class NoWitnessError(ValueError):
    pass


@dataclass(frozen=True)
class Orbit:
    points: tuple[ExtendedPoint, ...]

    def __post_init__(self):
        if not self.points:
            raise ValueError("orbits are non-empty")
        pts = tuple(sorted(set(self.points), key=point_key))
        object.__setattr__(self, "points", pts)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __contains__(self, p):
        return p in self.points

    @property
    def representative(self) -> ExtendedPoint:
        return self.points[0]

    def to_strings(self) -> list[str]:
        return [str(p) for p in self.points]

    def __str__(self):
        return "{" + ", ".join(self.to_strings()) + "}"


@dataclass(frozen=True)
class OrbitSetO:
    """Either infinite (``orbits is None``) or a finite list of orbits."""

    orbits: tuple[Orbit, ...] | None

    @property
    def infinite(self) -> bool:
        return self.orbits is None

    def __str__(self):
        if self.orbits is None:
            return "INFINITE"
        return "{" + ", ".join(str(o) for o in self.orbits) + "}"


def special_points() -> list[QuadPoint]:
    return [ZERO, ONE, -ONE, I, -I] + [omega(s, t) for s in (1, -1) for t in (1, -1)]


def orbit_of(G: FiniteGroup, p: ExtendedPoint) -> Orbit:
    return Orbit(tuple(apply_point(s, p) for s in G))


def _matches_fingrps_shape(s: MobiusMap) -> tuple[int, int] | None | bool:
    a, b, c, d = s.entries
    if (a, b, c, d) == (0, 1, 1, 0):
        return True
    if c == -b and d == -a and a * a != b * b:
        return (a, b)
    return None


def is_O_infinite(G: FiniteGroup) -> bool:
    """Exact membership test in {I, (0,1;1,0), (a,b;-b,-a), (b,a;-a,-b)}."""
    pairs = []
    for s in G:
        if s.is_identity():
            continue
        shape = _matches_fingrps_shape(s)
        if shape is None:
            return False
        if shape is not True:
            pairs.append(shape)
    if not pairs:
        return True
    a, b = pairs[0]
    allowed = {MobiusMap(a, b, -b, -a), MobiusMap(b, a, -a, -b)}
    return all(MobiusMap(x, y, -y, -x) in allowed for x, y in pairs)


def _in_O(orbit: Orbit) -> bool:
    for p in orbit:
        if isinstance(p, Infinity):
            return False
        if not (p.is_zero() or unit_circle_test(p)):
            return False
    return True


def compute_O(G: FiniteGroup) -> OrbitSetO:
    if is_O_infinite(G):
        return OrbitSetO(None)
    seen: list[Orbit] = []
    for p in special_points():
        orb = orbit_of(G, p)
        if orb not in seen and _in_O(orb):
            seen.append(orb)
    return OrbitSetO(tuple(seen))


def height_zeros(G: FiniteGroup) -> list[QuadPoint]:
    """Special points whose whole orbit is 0, infinity or roots of unity."""
    if is_O_infinite(G):
        raise ValueError("O infinite: zeros are all roots of unity")
    out = []
    for p in special_points():
        if all(
            isinstance(q, Infinity) or q.is_zero() or is_root_of_unity_quad(q)
            for q in orbit_of(G, p)
        ):
            out.append(p)
    return out


def minpoly_of_point(p: QuadPoint) -> Poly:
    """Primitive minimal polynomial of an exact point of degree <= 2."""
    from math import lcm

    if p.is_rational():
        return Poly((-p.a.numerator, p.a.denominator))
    # (x - a)^2 - d b^2
    c0 = p.a * p.a - p.d * p.b * p.b
    c1 = -2 * p.a
    den = lcm(c0.denominator, c1.denominator)
    return Poly((int(c0 * den), int(c1 * den), den))


def unity_witness(
    G: FiniteGroup, order_bound: int = 60, precision_bits: int = DEFAULT_PRECISION
) -> tuple[int, Poly, Interval]:
    """Smallest n <= order_bound with h_G(zeta_n) certified positive.

    A group with O infinite can still have such a witness when it maps the
    unit circle onto itself without permuting the roots of unity, e.g.
    z -> (9z - 5)/(5z - 9); the error below only reports that none was found.
    """
    if order_bound < 1:
        raise ValueError("order_bound must be >= 1")
    for n in range(1, order_bound + 1):
        phi = cyclotomic(n)
        h = orbit_height(G, phi, precision_bits)
        if h.lo > 0:
            return n, phi, h
    if is_O_infinite(G):
        raise NoWitnessError("no witness exists (O infinite)")
    raise NoWitnessError("bound too small")
