"""Certified root enclosures, Mahler measures, Weil heights and G-orbit heights."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .intervals import DEFAULT_PRECISION, Interval
from .mobius import FiniteGroup, OrbitHitsInfinity, inverse, pullback_minpoly
from .poly import (
    Poly,
    content_primitive,
    cyclotomic,
    is_cyclotomic_product,
    is_irreducible,
    is_squarefree,
    squarefree_decomposition,
)


class NotSquarefreeError(ValueError):
    pass


@dataclass(frozen=True)
class RootDisk:
    """Closed disk |z - center| <= radius containing exactly one root."""

    center: mpmath.mpc
    radius: mpmath.mpf

    def __complex__(self):
        return complex(self.center)

    def contains(self, z) -> bool:
        return abs(mpmath.mpc(z) - self.center) <= self.radius


# --- root finding -------------------------------------------------------------


def _aberth_float(coeffs: list[int], max_iter: int = 500) -> np.ndarray | None:
    """Aberth-Ehrlich iteration in double precision; None if it fails to settle."""
    c = np.array([float(x) for x in reversed(coeffs)], dtype=complex)  # high -> low
    n = len(c) - 1
    if not np.all(np.isfinite(c)):
        return None
    dc = np.polyder(c)
    # initial guesses on a circle of the geometric-mean root radius
    r = abs(c[-1] / c[0]) ** (1.0 / n) if c[-1] != 0 else 1.0
    r = r if np.isfinite(r) and r > 0 else 1.0
    z = r * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    with np.errstate(all="ignore"):
        for _ in range(max_iter):
            fz = np.polyval(c, z)
            dfz = np.polyval(dc, z)
            ratio = fz / dfz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            s = inv.sum(axis=1)
            w = ratio / (1 - ratio * s)
            if not np.all(np.isfinite(w)):
                return None
            z = z - w
            if np.all(np.abs(w) <= 1e-14 * np.maximum(1.0, np.abs(z))):
                return z
    return z if np.all(np.isfinite(z)) else None


def _initial_roots(f: Poly) -> list[complex]:
    z = _aberth_float(list(f.coeffs))
    if z is None:
        z = np.roots([float(x) for x in reversed(f.coeffs)])
    return [complex(v) for v in z]


def _aberth_mp(f: Poly, df: Poly, zs: list, max_iter: int = 60) -> list:
    n = len(zs)
    eps = mpmath.mpf(2) ** (-(mpmath.mp.prec - 8))
    for _ in range(max_iter):
        done = True
        new = list(zs)
        for i in range(n):
            zi = new[i]
            fz = f(zi)
            if fz == 0:
                continue
            ratio = fz / df(zi)
            s = mpmath.mpc(0)
            for j in range(n):
                if j != i:
                    dz = zi - new[j]
                    if dz == 0:
                        dz = eps
                    s += 1 / dz
            w = ratio / (1 - ratio * s)
            new[i] = zi - w
            if abs(w) > eps * max(1, abs(new[i])):
                done = False
        zs = new
        if done:
            break
    return zs


def _inclusion_disks(f: Poly, zs: list) -> list[RootDisk] | None:
    """Weierstrass (Braess-Hadeler) disks D(z_i, n|W_i|); None unless pairwise disjoint."""
    n = len(zs)
    u = mpmath.mpf(2) ** (-mpmath.mp.prec)
    lead = f.lead
    abs_coeffs = [abs(c) for c in f.coeffs]
    disks = []
    for i, zi in enumerate(zs):
        prod = mpmath.mpc(lead)
        for j, zj in enumerate(zs):
            if j != i:
                prod *= zi - zj
        if prod == 0:
            return None
        az = abs(zi)
        # rounding error of the Horner evaluation
        mag = mpmath.mpf(0)
        for c in reversed(abs_coeffs):
            mag = mag * az + c
        err = 8 * (n + 1) * u * mag
        w = (abs(f(zi)) + err) / abs(prod)
        disks.append(RootDisk(zi, n * w * (1 + 2 * u * n) + u * abs(zi)))
    for i in range(n):
        for j in range(i + 1, n):
            if abs(disks[i].center - disks[j].center) <= disks[i].radius + disks[j].radius:
                return None
    return disks


def complex_roots(f: Poly, precision_bits: int = DEFAULT_PRECISION) -> list[RootDisk]:
    """Disjoint disks, each holding exactly one root of square-free f.

    Radii are at most 2^(-precision_bits/2).
    """
    if f.degree < 1:
        raise ValueError("complex_roots needs degree >= 1")
    if not is_squarefree(f):
        raise NotSquarefreeError("polynomial is not square-free")
    target = mpmath.mpf(2) ** (-(precision_bits // 2))
    if f.degree == 1:
        with mpmath.workprec(precision_bits + 32):
            root = mpmath.mpf(-f.coeffs[0]) / f.coeffs[1]
            return [RootDisk(mpmath.mpc(root), abs(root) * mpmath.mpf(2) ** (-precision_bits - 30))]
    df = f.derivative()
    zs: list = _initial_roots(f)
    wp = precision_bits + 32
    for _ in range(8):
        with mpmath.workprec(wp):
            zs = _aberth_mp(f, df, [mpmath.mpc(z) for z in zs])
            disks = _inclusion_disks(f, zs)
            if disks is not None and all(d.radius <= target for d in disks):
                return sorted(disks, key=lambda d: (float(d.center.real), float(d.center.imag)))
        wp *= 2
    raise ArithmeticError("root enclosures could not be certified")


# --- Mahler measure -----------------------------------------------------------


def _cyclotomic_candidates(roots: np.ndarray, degree: int) -> list[int]:
    from .poly import _orders_with_phi_at_most

    bound = max(_orders_with_phi_at_most(degree))
    cands = set()
    for r in roots:
        if abs(abs(r) - 1) < 1e-6:
            t = (math.atan2(r.imag, r.real) / (2 * math.pi)) % 1.0
            frac = Fraction(t).limit_denominator(bound)
            if abs(float(frac) - t) < 1e-7 or abs(float(frac) - t - 1) < 1e-7:
                cands.add(max(frac.denominator, 1))
    return sorted(cands)


def strip_cyclotomic(g: Poly) -> tuple[Poly, dict[int, int]]:
    """Remove cyclotomic and x factors from a square-free primitive g, exactly.

    Only orders suggested by numerically unimodular roots are tried, and each
    factor is confirmed by exact division.
    """
    mults: dict[int, int] = {}
    while g.degree >= 1 and g.coeffs[0] == 0:
        g = Poly(g.coeffs[1:])
        mults[0] = mults.get(0, 0) + 1
    if g.degree < 1:
        return g, mults
    roots = np.roots([float(c) for c in reversed(g.coeffs)])
    for m in _cyclotomic_candidates(roots, g.degree):
        phi = cyclotomic(m)
        res = g.divmod_exact(phi)
        if res is not None and not res[1]:
            g = res[0]
            mults[m] = mults.get(m, 0) + 1
    return g, mults


def _mahler_squarefree(g: Poly, precision_bits: int) -> Interval:
    rest, _ = strip_cyclotomic(g)
    lead = abs(rest.lead)
    if rest.degree < 1:
        return Interval.exact(lead, precision_bits)
    disks = complex_roots(rest, precision_bits)
    out = Interval.exact(lead, precision_bits)
    with mpmath.workprec(precision_bits + 32):
        for dk in disks:
            a = abs(dk.center)
            lo, hi = a - dk.radius, a + dk.radius
            if hi <= 1:
                continue
            out = out * Interval.from_bounds(max(lo, 1), hi, precision_bits)
    return out


@lru_cache(maxsize=65536)
def _mahler_cached(f: Poly, precision_bits: int) -> Interval:
    c, parts = squarefree_decomposition(f)
    out = Interval.exact(abs(c), precision_bits)
    for g, e in parts:
        mg = _mahler_squarefree(g, precision_bits)
        out = out * (mg**e if e > 1 else mg)
    return out


def mahler_measure(f: Poly, precision_bits: int = DEFAULT_PRECISION) -> Interval:
    """Interval enclosure of |a_n| * prod max(|alpha_i|, 1)."""
    if not f:
        raise ValueError("Mahler measure of the zero polynomial")
    c, p = content_primitive(f)
    if p.degree < 1 or is_cyclotomic_product(p):
        return Interval.exact(c * abs(p.lead), precision_bits)
    return _mahler_cached(f, precision_bits)


# --- heights ------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _check_minpoly(f: Poly) -> None:
    if f.degree < 1:
        raise ValueError("minimal polynomial must have positive degree")
    c, _ = content_primitive(f)
    if c != 1 or f.lead < 0:
        raise ValueError("minimal polynomial must be primitive with positive leading coefficient")
    if not is_irreducible(f):
        raise ValueError(f"{f} is not irreducible")


@dataclass(frozen=True)
class AlgebraicNumber:
    """An algebraic number given by its minimal polynomial and optionally a root disk."""

    minpoly: Poly
    root: RootDisk | None = None

    def __post_init__(self):
        _check_minpoly(self.minpoly)
        if self.root is not None:
            disks = complex_roots(self.minpoly)
            hits = [d for d in disks if abs(d.center - self.root.center) <= d.radius + self.root.radius]
            if len(hits) != 1:
                raise ValueError("root selector must isolate exactly one root")

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @classmethod
    def from_rational(cls, x: Fraction | int) -> "AlgebraicNumber":
        x = Fraction(x)
        return cls(Poly((-x.numerator, x.denominator)))

    def value(self, precision_bits: int = DEFAULT_PRECISION):
        if self.root is None:
            raise ValueError("no root selected")
        return self.root.center


def _zero(prec: int) -> Interval:
    return Interval.exact(0, prec)


def weil_height(x: AlgebraicNumber | Poly, precision_bits: int = DEFAULT_PRECISION) -> Interval:
    f = x.minpoly if isinstance(x, AlgebraicNumber) else x
    return mahler_measure(f, precision_bits).log() / f.degree


def orbit_height(G: FiniteGroup, x: AlgebraicNumber | Poly, precision_bits: int = DEFAULT_PRECISION) -> Interval:
    """Sum of the Weil heights of sigma(alpha) over sigma in G.

    A conjugate sent to infinity contributes 0 (height of [1:0]).
    """
    f = x.minpoly if isinstance(x, AlgebraicNumber) else x
    total = _zero(precision_bits)
    for s in G:
        try:
            g = pullback_minpoly(f, inverse(s))
        except OrbitHitsInfinity as exc:
            g = exc.remaining
            if g.degree < 1:
                continue
        total = total + weil_height(g, precision_bits)
    return total


def mahler_orbit_product(G: FiniteGroup, f: Poly, precision_bits: int = DEFAULT_PRECISION) -> Interval:
    """Product over sigma in G of M(f_sigma); raises OrbitHitsInfinity on degree drop."""
    out = Interval.exact(1, precision_bits)
    for s in G:
        out = out * mahler_measure(pullback_minpoly(f, s), precision_bits)
    return out


def maximal_root(f: Poly, precision_bits: int = DEFAULT_PRECISION) -> mpmath.mpc:
    """Root of largest absolute value with nonnegative imaginary part."""
    disks = complex_roots(f, precision_bits)
    best = max(abs(d.center) for d in disks)
    tied = [d for d in disks if abs(d.center) >= best - 2 * d.radius - mpmath.mpf(2) ** (-precision_bits // 4)]
    upper = [d for d in tied if d.center.imag >= -d.radius]
    return max(upper or tied, key=lambda d: d.center.imag).center
