"""Heights of algebraic numbers summed over orbits of finite Mobius groups."""

from .heights import AlgebraicNumber, mahler_measure, orbit_height, weil_height
from .intervals import Interval
from .mobius import FiniteGroup, MobiusMap, generate_group, parse_group, parse_matrix
from .numth import QuadPoint, parse_point
from .orbits import compute_O, height_zeros, unity_witness
from .poly import Poly, parse_poly

__all__ = [
    "AlgebraicNumber",
    "FiniteGroup",
    "Interval",
    "MobiusMap",
    "Poly",
    "QuadPoint",
    "compute_O",
    "generate_group",
    "height_zeros",
    "mahler_measure",
    "orbit_height",
    "parse_group",
    "parse_matrix",
    "parse_point",
    "parse_poly",
    "unity_witness",
    "weil_height",
]
__version__ = "0.1.0"
