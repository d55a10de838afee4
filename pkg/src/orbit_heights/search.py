"""Exhaustive minimization of the G-orbit height over small integer polynomials."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator

import mpmath
import numpy as np

from .heights import orbit_height
from .intervals import DEFAULT_PRECISION, Interval
from .mobius import FiniteGroup, OrbitHitsInfinity, inverse, pullback_minpoly
from .orbits import compute_O
from .poly import Poly, is_cyclotomic_product, is_irreducible

ZERO_WIDTH = mpmath.mpf(10) ** -20
TIE_EPS = 1e-15
# float screening margin; numpy roots of these small polynomials are far more accurate
SCREEN_MARGIN = 1e-6


class EmptySearchError(ValueError):
    pass


@dataclass(frozen=True)
class SearchSpace:
    max_degree: int
    max_height: int
    skip_cyclotomic: bool = False

    def __post_init__(self):
        if self.max_degree < 1 or self.max_height < 1:
            raise ValueError("max_degree and max_height must be >= 1")


@dataclass
class SearchResult:
    value: Interval
    witness: Poly
    count: int
    examined: int

    def to_record(self, space: SearchSpace) -> dict:
        return {
            "space": {"deg": space.max_degree, "height": space.max_height, "skip_cyclotomic": space.skip_cyclotomic},
            "count": self.count,
            "examined": self.examined,
            "min": self.value.to_string(),
            "min_float": float(self.value),
            "witness": str(self.witness),
        }


def _block_polys(n: int, lead: int, H: int, skip_cyclotomic: bool) -> Iterator[Poly]:
    for rest in itertools.product(range(-H, H + 1), repeat=n):
        f = Poly(rest + (lead,))
        if math.gcd(*f.coeffs) != 1:
            continue
        if not is_irreducible(f):
            continue
        if skip_cyclotomic and f.coeffs[0] != 0 and is_cyclotomic_product(f):
            continue
        yield f


def _blocks(space: SearchSpace) -> list[tuple[int, int]]:
    return [(n, lead) for n in range(1, space.max_degree + 1) for lead in range(1, space.max_height + 1)]


def enum_polys(space: SearchSpace) -> Iterator[Poly]:
    """Primitive irreducible f with 1 <= deg f <= max_degree, |coeffs| <= H, lead > 0."""
    for n, lead in _blocks(space):
        yield from _block_polys(n, lead, space.max_height, space.skip_cyclotomic)


def _pullbacks(G: FiniteGroup, f: Poly) -> list[Poly]:
    out = []
    for s in G:
        try:
            out.append(pullback_minpoly(f, inverse(s)))
        except OrbitHitsInfinity as exc:
            if exc.remaining.degree >= 1:
                out.append(exc.remaining)
    return out


def orbit_height_lower_bound(pulls: list[Poly]) -> float:
    """sum log max(|a_0|, |a_n|) / n, a rigorous lower bound since M(g) >= max(|a_0|, |a_n|)."""
    return sum(math.log(max(abs(g.coeffs[0]), abs(g.lead))) / g.degree for g in pulls)


def _float_orbit_height(pulls: list[Poly]) -> float:
    total = 0.0
    for g in pulls:
        r = np.roots([float(c) for c in reversed(g.coeffs)])
        total += (math.log(abs(g.lead)) + float(np.sum(np.log(np.maximum(np.abs(r), 1.0))))) / g.degree
    return total


def _better(val: Interval, f: Poly, best: Interval | None, best_f: Poly | None) -> bool:
    if best is None:
        return True
    d = float(val.mid - best.mid)
    if d < -TIE_EPS:
        return True
    return abs(d) <= TIE_EPS and f.sort_key() < best_f.sort_key()


def _search_block(args) -> tuple[Interval | None, Poly | None, int, int]:
    G, block, space, bits, bound = args
    best, best_f = None, None
    count = examined = 0
    for f in _block_polys(block[0], block[1], space.max_height, space.skip_cyclotomic):
        count += 1
        pulls = _pullbacks(G, f)
        cutoff = bound if best is None else min(bound, float(best.hi))
        if orbit_height_lower_bound(pulls) > cutoff + SCREEN_MARGIN:
            continue
        if _float_orbit_height(pulls) > cutoff + SCREEN_MARGIN:
            continue
        examined += 1
        h = orbit_height(G, f, bits)
        if h.lo <= 0 <= h.hi and h.width < ZERO_WIDTH:
            continue
        if _better(h, f, best, best_f):
            best, best_f = h, f
    return best, best_f, count, examined


def min_orbit_height(
    G: FiniteGroup,
    space: SearchSpace,
    precision_bits: int = DEFAULT_PRECISION,
    workers: int = 1,
    progress: Callable[[dict], None] | None = None,
) -> SearchResult:
    """Smallest positive certified h_G over enum_polys(space), with its witness.

    Ties (midpoints within 1e-15) go to the witness with the smallest
    ``Poly.sort_key``. Polynomials whose rigorous lower bound, or float
    estimate, already exceeds the running minimum are skipped.
    """
    if compute_O(G).infinite:
        raise ValueError("search needs a group with finite O")
    blocks = _blocks(space)
    best, best_f = None, None
    count = examined = 0

    def absorb(res, block):
        nonlocal best, best_f, count, examined
        b, bf, c, e = res
        count += c
        examined += e
        if b is not None and _better(b, bf, best, best_f):
            best, best_f = b, bf
        if progress is not None:
            progress({
                "space": {"deg": space.max_degree, "height": space.max_height},
                "block": {"deg": block[0], "lead": block[1]},
                "count": count,
                "min": None if best is None else float(best),
                "witness": None if best_f is None else str(best_f),
            })

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            jobs = [(G, blk, space, precision_bits, math.inf) for blk in blocks]
            for blk, res in zip(blocks, pool.map(_search_block, jobs)):
                absorb(res, blk)
    else:
        for blk in blocks:
            bound = math.inf if best is None else float(best.hi)
            absorb(_search_block((G, blk, space, precision_bits, bound)), blk)

    if count == 0:
        raise EmptySearchError("empty search space")
    if best is None:
        raise EmptySearchError("every polynomial in the search space has orbit height 0")
    return SearchResult(best, best_f, count, examined)
