import math
import random
from fractions import Fraction

import mpmath
import pytest

from orbit_heights.heights import orbit_height
from orbit_heights.mobius import MobiusMap, generate_group, parse_group
from orbit_heights.numth import I, INFINITY, ONE, ZERO, QuadPoint, omega, parse_point
from orbit_heights.orbits import (
    NoWitnessError,
    Orbit,
    compute_O,
    height_zeros,
    is_O_infinite,
    minpoly_of_point,
    orbit_of,
    special_points,
    unity_witness,
)
from orbit_heights.poly import cyclotomic, eval_quad, parse_poly

import props

TABLE_GROUPS = props.table_groups()


def pts(*texts):
    return {parse_point(t) for t in texts}


def test_special_points():
    sp = special_points()
    assert len(sp) == 9 and len(set(sp)) == 9
    assert all(p.is_zero() or p.norm() == 1 for p in sp)


def test_orbit_canonical_order_and_dedup():
    o = Orbit((ONE, ZERO, ONE, -ONE))
    assert o.points == (-ONE, ZERO, ONE)
    assert str(o) == "{-1, 0, 1}"
    with pytest.raises(ValueError):
        Orbit(())


def test_orbit_with_infinity():
    G = generate_group([MobiusMap(0, 2, 1, 0)])
    assert set(orbit_of(G, ZERO)) == {ZERO, INFINITY}


@pytest.mark.parametrize(
    "group, expected",
    [
        ("1,-1;3,1", [pts("0", "-1", "1")]),
        ("1,1;-1,1", [pts("i"), pts("-i")]),
        ("0,2;1,0", []),
        ("1,-1;0,-1", [pts("0", "1"), pts("1/2+sqrt(-3)/2", "1/2-sqrt(-3)/2")]),
    ],
)
def test_compute_O_examples(group, expected):
    oset = compute_O(parse_group(group))
    assert not oset.infinite
    assert sorted(map(set, oset.orbits), key=str) == sorted(expected, key=str)


@pytest.mark.parametrize("group", ["0,1;1,0", "1,0;0,1", "1,0;0,-1", "2,3;-3,-2", "0,1;1,0|2,3;-3,-2"])
def test_O_infinite_shapes(group):
    G = parse_group(group)
    assert is_O_infinite(G)
    assert compute_O(G).infinite
    assert str(compute_O(G)) == "INFINITE"


def test_O_infinite_on_generated_subgroups():
    rng = random.Random(11)
    for G in props.fingrps_subgroups(rng, 50):
        assert props.check_fingrps_infinite(G)


def test_table_groups_have_finite_O():
    for label, G, _ in TABLE_GROUPS:
        assert not is_O_infinite(G), label
        assert props.check_O_members(G), label


def test_unit_circle_preserving_group_has_positive_unity_height():
    # O is infinite here, yet zeta_3 is moved off the roots of unity (see unity_witness)
    G = parse_group("9,-5;5,-9")
    assert is_O_infinite(G)
    assert orbit_height(G, cyclotomic(3)).lo > 0
    assert orbit_height(G, cyclotomic(2)).hi == 0


def test_roots_of_unity_have_height_zero_for_involution():
    G = parse_group("0,1;1,0")
    for m in range(1, 13):
        assert orbit_height(G, cyclotomic(m)).hi == 0


@pytest.mark.parametrize(
    "group, expected",
    [
        ("1,-1;3,1", {"0", "1", "-1"}),
        ("1,-1;0,-1", {"0", "1", "1/2+sqrt(-3)/2", "1/2-sqrt(-3)/2"}),
        ("1,1;-1,1", {"0", "1", "-1", "i", "-i"}),
    ],
)
def test_height_zeros_examples(group, expected):
    assert set(height_zeros(parse_group(group))) == pts(*expected)


def test_height_zeros_rejects_infinite_O():
    with pytest.raises(ValueError, match="O infinite: zeros are all roots of unity"):
        height_zeros(parse_group("0,1;1,0"))


def test_height_zeros_point_zero_with_infinity():
    # orbit {0, oo} is not in O but is still a zero of h_G
    G = generate_group([MobiusMap(0, 2, 1, 0)])
    assert ZERO in height_zeros(G)
    assert compute_O(G).orbits == ()


def test_height_zeros_exact_on_table_groups():
    for label, G, _ in TABLE_GROUPS:
        assert props.check_height_zeros_exact(G), label


def test_i_is_not_a_zero_for_table_row_4():
    G = parse_group("1,-1;3,1")
    assert I not in height_zeros(G)
    assert abs(orbit_height(G, parse_poly("x^2+1")).mid - math.log(5)) < 1e-30


@pytest.mark.parametrize("p", special_points() + [QuadPoint(Fraction(3, 7)), QuadPoint(Fraction(1, 2), Fraction(5, 3), -1)])
def test_minpoly_of_point(p):
    f = minpoly_of_point(p)
    assert eval_quad(f, p).is_zero()
    assert f.lead > 0 and f.degree == (1 if p.is_rational() else 2)


def test_unity_witness_examples():
    n, phi, h = unity_witness(parse_group("1,-1;0,-1"))
    assert n == 2 and phi == parse_poly("x+1")
    assert abs(h.mid - math.log(2)) < 1e-30
    # smallest order: zeta_3 already leaves the unit circle under z -> (z-1)/(3z+1)
    n, phi, h = unity_witness(parse_group("1,-1;3,1"))
    assert n == 3 and h.lo > 0
    with pytest.raises(NoWitnessError, match="no witness exists"):
        unity_witness(parse_group("0,1;1,0"))
    with pytest.raises(NoWitnessError, match="bound too small"):
        unity_witness(parse_group("1,-1;0,-1"), order_bound=1)
    with pytest.raises(ValueError):
        unity_witness(parse_group("1,-1;0,-1"), order_bound=0)


def test_unity_witness_bound_12_on_table_groups():
    for label, G, _ in TABLE_GROUPS:
        n, _, h = unity_witness(G, order_bound=12)
        assert n <= 12 and h.lo > 0, label
