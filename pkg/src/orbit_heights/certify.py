"""Lower-bound certification for sum log+|sigma(z)| - sum B_i log|phi_i(z)|.

The minimum of this gap over C is the best constant D for the corresponding
height inequality. It is G-invariant and harmonic off the circles
|sigma(z)| = 1, so sampling concentrates on those circles; a coarse grid over
an annulus is added as a safety net.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from typing import Sequence

import mpmath
import numpy as np
from scipy import optimize

from .intervals import DEFAULT_PRECISION
from .mobius import FiniteGroup, MobiusMap, inverse
from .numth import Infinity
from .orbits import Orbit, compute_O, minpoly_of_point
from .poly import Poly, RationalFunction, primitive_ratfunc


class IndeterminateError(ArithmeticError):
    pass


@dataclass(frozen=True)
class PhiSet:
    phis: tuple[RationalFunction, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        if len(self.phis) != len(self.weights):
            raise ValueError("one weight per phi is required")
        if any(not w > 0 for w in self.weights):
            raise ValueError("weights must be positive")


@dataclass(frozen=True)
class SamplingConfig:
    circle_samples: int = 16384
    grid: int = 600
    r_min: float = 0.2
    r_max: float = 5.0
    tol: float = 1e-4
    precision_bits: int = DEFAULT_PRECISION


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class CertReport:
    claimed_D: float
    observed_min: float
    argmin: complex
    margin: float
    samples: int
    passed: bool
    checks: list[Check] = field(default_factory=list)
    label: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        d["argmin"] = [self.argmin.real, self.argmin.imag]
        d["pass"] = d.pop("passed")
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CertReport":
        d = dict(d)
        d["passed"] = d.pop("pass")
        re, im = d["argmin"]
        d["argmin"] = complex(re, im)
        d["checks"] = [Check(**c) for c in d.get("checks", [])]
        return cls(**d)


# --- phi ------------------------------------------------------------------------


def _poly_of_mobius_image(p: Poly, s: MobiusMap) -> tuple[Poly, Poly]:
    """p(s(z)) as (numerator, denominator) integer polynomials."""
    a, b, c, d = s.entries
    n = p.degree
    num = Poly((b, a))
    den = Poly((d, c))
    out = Poly()
    for k, coeff in enumerate(p.coeffs):
        if coeff:
            out = out + coeff * num**k * den ** (n - k)
    return out, den**n


def build_phi(G: FiniteGroup, orbit: Orbit) -> RationalFunction:
    """prod_{sigma in G} p(sigma(z)) for p the minimal polynomial of an orbit point.

    The rational constant is normalized away: numerator and denominator are
    primitive with positive leading coefficients.
    """
    oset = compute_O(G)
    if oset.infinite or orbit not in oset.orbits:
        raise ValueError(f"orbit {orbit} is not in O for this group")
    rep = next((q for q in orbit if q.is_zero()), orbit.representative)
    p = minpoly_of_point(rep)
    num, den = Poly((1,)), Poly((1,))
    for s in G:
        n_s, d_s = _poly_of_mobius_image(p, s)
        num, den = num * n_s, den * d_s
    return primitive_ratfunc(num, den)


def make_phi_set(G: FiniteGroup, orbits: Sequence[Orbit], weights: Sequence[float]) -> PhiSet:
    return PhiSet(tuple(build_phi(G, o) for o in orbits), tuple(float(w) for w in weights))


# --- the gap function -------------------------------------------------------------


def archimedean_gap(G: FiniteGroup, phi_set: PhiSet, z, precision_bits: int = DEFAULT_PRECISION):
    """sum_sigma log+|sigma(z)| - sum_i B_i log|phi_i(z)| at one point, in mpmath.

    Returns +inf at zeros of a phi numerator and at poles of sigma where phi is
    finite; raises IndeterminateError where +inf meets -inf.
    """
    with mpmath.workprec(precision_bits):
        z = mpmath.mpc(z)
        pole = False
        total = mpmath.mpf(0)
        for s in G:
            den = s.c * z + s.d
            if den == 0:
                pole = True
                continue
            w = abs((s.a * z + s.b) / den)
            if w > 1:
                total += mpmath.log(w)
        plus_inf = pole
        for phi, B in zip(phi_set.phis, phi_set.weights):
            nv, dv = phi.num(z), phi.den(z)
            if dv == 0:
                if nv != 0:
                    if pole:
                        raise IndeterminateError("indeterminate at pole")
                    raise IndeterminateError("phi has a pole where no group element does")
                raise IndeterminateError("indeterminate at pole")
            if nv == 0:
                plus_inf = True
                continue
            total -= mpmath.mpf(B) * (mpmath.log(abs(nv)) - mpmath.log(abs(dv)))
        if plus_inf:
            return mpmath.inf
        return total


class GapFunction:
    """Vectorized double-precision evaluation of the gap for one (G, phi_set)."""

    def __init__(self, G: FiniteGroup, phi_set: PhiSet):
        self.G = G
        self.phi_set = phi_set
        self._mats = np.array([s.entries for s in G], dtype=float)
        self._phis = [
            (np.array(phi.num.coeffs[::-1], dtype=float), np.array(phi.den.coeffs[::-1], dtype=float), B)
            for phi, B in zip(phi_set.phis, phi_set.weights)
        ]

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        total = np.zeros(z.shape)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            for a, b, c, d in self._mats:
                w = np.abs((a * z + b) / (c * z + d))
                total += np.log(np.maximum(w, 1.0))
            for num, den, B in self._phis:
                total -= B * (np.log(np.abs(np.polyval(num, z))) - np.log(np.abs(np.polyval(den, z))))
        return np.where(np.isnan(total), np.inf, total)

    def singular_points(self) -> np.ndarray:
        pts = []
        for a, b, c, d in self._mats:
            if c != 0:
                pts.append(-d / c)
        for num, den, _ in self._phis:
            for poly in (num, den):
                if len(poly) > 1:
                    pts.extend(np.roots(poly))
        return np.array(pts, dtype=complex)

    def circle_points(self, samples: int) -> tuple[np.ndarray, list[MobiusMap]]:
        """Points on every circle |sigma(z)| = 1, as sigma^{-1}(e^{i theta})."""
        theta = 2 * np.pi * (np.arange(samples) + 0.5) / samples
        w = np.exp(1j * theta)
        chunks = []
        owners = []
        for s in self.G:
            t = inverse(s)
            with np.errstate(divide="ignore", invalid="ignore"):
                z = (t.a * w + t.b) / (t.c * w + t.d)
            chunks.append(z)
            owners.append(t)
        return np.concatenate(chunks), owners


def _avoid_singular(z: np.ndarray, singular: np.ndarray, step: float) -> np.ndarray:
    z = np.where(np.isfinite(z), z, 1e6)
    if singular.size:
        dist = np.min(np.abs(z[:, None] - singular[None, :]), axis=1)
        z = np.where(dist < 1e-12, z + step * (1 + 1j) / math.sqrt(2), z)
    return z


def _refine(gap: GapFunction, owner: MobiusMap, theta0: float, h: float, z0: complex) -> tuple[float, complex]:
    """Local descent from a sampled minimum: along its circle, then in the plane."""

    def on_circle(t):
        w = complex(math.cos(t), math.sin(t))
        den = owner.c * w + owner.d
        if den == 0:
            return math.inf
        return float(gap(np.array([(owner.a * w + owner.b) / den]))[0])

    best_val = float(gap(np.array([z0]))[0])
    best_z = z0
    res = optimize.minimize_scalar(on_circle, bounds=(theta0 - 2 * h, theta0 + 2 * h), method="bounded",
                                   options={"xatol": 1e-13})
    if res.fun < best_val:
        w = complex(math.cos(res.x), math.sin(res.x))
        best_val, best_z = float(res.fun), (owner.a * w + owner.b) / (owner.c * w + owner.d)

    def planar(v):
        return float(gap(np.array([complex(v[0], v[1])]))[0])

    res2 = optimize.minimize(planar, [best_z.real, best_z.imag], method="Nelder-Mead",
                             options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
    if res2.fun < best_val:
        best_val, best_z = float(res2.fun), complex(res2.x[0], res2.x[1])
    return best_val, best_z


def _circle_minimum(gap: GapFunction, samples: int) -> tuple[float, complex, int]:
    z, owners = gap.circle_points(samples)
    h = 2 * np.pi / samples
    z = _avoid_singular(z, gap.singular_points(), h)
    vals = gap(z)
    k = int(np.argmin(vals))
    owner = owners[k // samples]
    theta0 = 2 * np.pi * ((k % samples) + 0.5) / samples
    val, zmin = _refine(gap, owner, theta0, h, complex(z[k]))
    return min(val, float(vals[k])), zmin if val <= vals[k] else complex(z[k]), len(z)


def estimate_optimal_D(G: FiniteGroup, phi_set: PhiSet, cfg: SamplingConfig = SamplingConfig()) -> tuple[float, complex]:
    """Minimum of the gap over all circles |sigma(z)| = 1, refined by local descent."""
    gap = GapFunction(G, phi_set)
    val, zmin, _ = _circle_minimum(gap, cfg.circle_samples)
    return val, zmin


def certify_lower_bound(
    G: FiniteGroup, phi_set: PhiSet, claimed_D: float, cfg: SamplingConfig = SamplingConfig()
) -> CertReport:
    """Sampling check that the gap stays above claimed_D - cfg.tol.

    Samples every circle |sigma(z)| = 1 and a grid over the annulus
    r_min <= |z| <= r_max; the best sample is refined locally so the reported
    minimum is not an artefact of grid spacing.
    """
    gap = GapFunction(G, phi_set)
    circ_val, circ_z, n_circ = _circle_minimum(gap, cfg.circle_samples)
    xs = np.linspace(-cfg.r_max, cfg.r_max, cfg.grid)
    xx, yy = np.meshgrid(xs, xs)
    zg = (xx + 1j * yy).ravel()
    zg = zg[(np.abs(zg) >= cfg.r_min) & (np.abs(zg) <= cfg.r_max)]
    step = float(xs[1] - xs[0]) if cfg.grid > 1 else 1.0
    zg = _avoid_singular(zg, gap.singular_points(), step)
    gvals = gap(zg)
    kg = int(np.argmin(gvals)) if zg.size else 0
    observed, argmin = circ_val, circ_z
    if zg.size and gvals[kg] < observed:
        observed, argmin = float(gvals[kg]), complex(zg[kg])
    return CertReport(
        claimed_D=float(claimed_D),
        observed_min=float(observed),
        argmin=complex(argmin),
        margin=float(observed - claimed_D),
        samples=int(n_circ + zg.size),
        passed=bool(observed >= claimed_D - cfg.tol),
    )


def optimize_weights(
    G: FiniteGroup, phis: Sequence[RationalFunction], start: Sequence[float], cfg: SamplingConfig,
    maxiter: int = 400,
) -> tuple[tuple[float, ...], float, complex]:
    """Locally maximize estimate_optimal_D over the weights (informational)."""
    phis = tuple(phis)

    def neg_d(v):
        if any(x <= 0 for x in v):
            return math.inf
        return -estimate_optimal_D(G, PhiSet(phis, tuple(float(x) for x in v)), cfg)[0]

    res = optimize.minimize(neg_d, list(start), method="Nelder-Mead",
                            options={"xatol": 1e-6, "fatol": 1e-9, "maxiter": maxiter})
    weights = tuple(float(x) for x in res.x)
    d, z = estimate_optimal_D(G, PhiSet(phis, weights), cfg)
    return weights, d, z
