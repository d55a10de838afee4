"""Property checks shared by the hypothesis suites and the acceptance module."""

from __future__ import annotations

import random
from fractions import Fraction

import mpmath

from orbit_heights.certify import PhiSet, archimedean_gap
from orbit_heights.heights import mahler_measure, orbit_height
from orbit_heights.mobius import (
    IDENTITY,
    FiniteGroup,
    MobiusMap,
    compose,
    generate_group,
    inverse,
    pullback_minpoly,
)
from orbit_heights.orbits import compute_O, height_zeros, is_O_infinite, orbit_of, special_points
from orbit_heights.numth import QuadPoint
from orbit_heights.poly import Poly, cyclotomic, is_irreducible, primitive_part
from orbit_heights.tables import bundled_rows, distinct_phis, instantiate


def graeffe(f: Poly) -> Poly:
    """g(x^2) = (-1)^n f(x) f(-x); the roots of g are the squares of those of f."""
    n = f.degree
    fm = Poly(tuple(c * (-1) ** k for k, c in enumerate(f.coeffs)))
    h = f * fm
    g = Poly(tuple(h.coeffs[0::2]))
    return g if n % 2 == 0 else -g


def rel_close(a, b, rel: float) -> bool:
    return abs(a - b) <= rel * max(abs(a), abs(b))


def check_mahler_multiplicative(f: Poly, g: Poly, rel: float = 1e-10) -> bool:
    return rel_close(mahler_measure(f * g).mid, mahler_measure(f).mid * mahler_measure(g).mid, rel)


def check_mahler_graeffe(f: Poly, rel: float = 1e-10) -> bool:
    m = mahler_measure(f).mid
    return rel_close(mahler_measure(graeffe(f)).mid, m * m, rel)


def check_mahler_oracle(f: Poly, rel: float = 1e-10) -> bool:
    """Against mpmath.polyroots, which shares no code with the certified root finder."""
    with mpmath.workdps(40):
        roots = mpmath.polyroots(list(reversed(f.coeffs)), maxsteps=2000, extraprec=400)
        ref = abs(mpmath.mpf(f.lead))
        for r in roots:
            ref *= max(abs(r), 1)
    return rel_close(mahler_measure(f).mid, ref, rel)


def check_group_axioms(G: FiniteGroup, rng: random.Random, trials: int = 1) -> bool:
    els = list(G)
    if IDENTITY not in G:
        return False
    for _ in range(trials):
        a, b, c = (rng.choice(els) for _ in range(3))
        if compose(a, b) not in G or inverse(a) not in G:
            return False
        if compose(compose(a, b), c) != compose(a, compose(b, c)):
            return False
        if compose(a, inverse(a)) != IDENTITY or compose(a, IDENTITY) != a:
            return False
    return True


def check_pullback_roundtrip(f: Poly, s: MobiusMap) -> bool:
    """pullback by s then by s^{-1} returns f (normalized), when no root goes to infinity."""
    g = pullback_minpoly(f, s)
    back = pullback_minpoly(g, inverse(s))
    return back == primitive_part(f) and is_irreducible(g)


def fingrps_subgroups(rng: random.Random, count: int) -> list[FiniteGroup]:
    """Groups generated by subsets of {(0,1;1,0), (a,b;-b,-a), (b,a;-a,-b)}."""
    out = []
    while len(out) < count:
        a, b = rng.randint(-9, 9), rng.randint(-9, 9)
        if a * a == b * b:
            continue
        pool = [MobiusMap(0, 1, 1, 0), MobiusMap(a, b, -b, -a), MobiusMap(b, a, -a, -b)]
        gens = [g for g in pool if rng.random() < 0.6] or [rng.choice(pool)]
        out.append(generate_group(gens))
    return out


def check_fingrps_infinite(G: FiniteGroup) -> bool:
    """is_O_infinite holds, and every element maps the unit circle onto itself."""
    if not is_O_infinite(G):
        return False
    for s in G:
        for k in range(7):
            w = mpmath.expjpi(mpmath.mpf(2 * k + 1) / 7)
            if abs(abs(s.apply_complex(w)) - 1) > 1e-12:
                return False
    one = QuadPoint(Fraction(1))
    return set(orbit_of(G, one).points) <= {one, -one}


def table_groups() -> list[tuple[str, FiniteGroup, PhiSet | None]]:
    """Every bundled row at p/q = 5 and each sign, with its phi set where weights are known."""
    out = []
    for row in bundled_rows():
        for s in row.signs:
            spec = instantiate(row, s, 5, 1)
            w = spec.weights()
            phis = PhiSet(distinct_phis(spec.group, spec.orbits), w) if w is not None else None
            out.append((spec.label, spec.group, phis))
    return out


def random_point(rng: random.Random) -> mpmath.mpc:
    r = mpmath.mpf(rng.uniform(0.05, 6.0))
    t = mpmath.mpf(rng.uniform(0, 2 * 3.141592653589793))
    return mpmath.mpc(r * mpmath.cos(t), r * mpmath.sin(t))


def check_gap_invariance(G: FiniteGroup, phis: PhiSet, z, tol: float = 1e-10) -> bool:
    base = archimedean_gap(G, phis, z)
    for s in G:
        den = s.c * z + s.d
        if abs(den) < mpmath.mpf(10) ** -6:
            continue
        v = archimedean_gap(G, phis, (s.a * z + s.b) / den)
        if abs(v - base) > tol:
            return False
    return True


def check_height_zeros_exact(G: FiniteGroup) -> bool:
    """Zeros give an exact 0 enclosure; the other special points a positive lower bound."""
    from orbit_heights.orbits import minpoly_of_point

    zeros = set(height_zeros(G))
    for p in special_points():
        h = orbit_height(G, minpoly_of_point(p))
        if p in zeros:
            if not (h.lo <= 0 <= h.hi and h.width < mpmath.mpf(10) ** -30):
                return False
        elif not h.lo > 0:
            return False
    return True


def check_O_members(G: FiniteGroup) -> bool:
    oset = compute_O(G)
    if oset.infinite:
        return True
    return all(p.is_zero() or p.norm() == 1 for o in oset.orbits for p in o) and all(
        orbit_of(G, o.representative) == o for o in oset.orbits
    )


def kronecker(m: int) -> bool:
    h = orbit_height(FiniteGroup((IDENTITY,)), cyclotomic(m))
    return h.lo == 0 and h.hi == 0


def random_poly(rng: random.Random, max_deg: int = 4, H: int = 5) -> Poly:
    while True:
        n = rng.randint(1, max_deg)
        f = Poly(tuple(rng.randint(-H, H) for _ in range(n)) + (rng.randint(1, H),))
        if f.coeffs[0] != 0:
            return f


def rational_point(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-20, 20), rng.randint(1, 9))
