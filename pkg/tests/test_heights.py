import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from orbit_heights.heights import (
    AlgebraicNumber,
    NotSquarefreeError,
    RootDisk,
    complex_roots,
    mahler_measure,
    mahler_orbit_product,
    maximal_root,
    orbit_height,
    weil_height,
)
from orbit_heights.mobius import IDENTITY, FiniteGroup, MobiusMap, OrbitHitsInfinity, generate_group, pullback_minpoly
from orbit_heights.poly import Poly, content_primitive, cyclotomic, is_irreducible, parse_poly

import props

LEHMER = parse_poly("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1")
TRIVIAL = FiniteGroup((IDENTITY,))
ZAGIER = generate_group([MobiusMap(1, -1, 0, -1)])
C3_TABLE = generate_group([MobiusMap(1, -1, 3, 1)])


@st.composite
def polys(draw, max_deg=4, H=5):
    n = draw(st.integers(1, max_deg))
    cs = draw(st.lists(st.integers(-H, H), min_size=n, max_size=n)) + [draw(st.integers(1, H))]
    return Poly(tuple(cs))


@st.composite
def irreducible_polys(draw, max_deg=4, H=5):
    f = draw(polys(max_deg, H))
    c, _ = content_primitive(f)
    assume(c == 1 and is_irreducible(f))
    return f


# --- roots ----------------------------------------------------------------------


def test_roots_of_x2_plus_1():
    disks = complex_roots(parse_poly("x^2+1"))
    assert len(disks) == 2
    assert any(d.contains(mpmath.mpc(0, 1)) for d in disks)
    assert any(d.contains(mpmath.mpc(0, -1)) for d in disks)
    assert all(d.radius < 1e-30 for d in disks)


def test_roots_golden_ratio():
    disks = complex_roots(parse_poly("x^2-x-1"))
    with mpmath.workprec(200):
        phi = (1 + mpmath.sqrt(5)) / 2
        assert any(d.contains(phi) for d in disks)
        assert any(d.contains(1 - phi) for d in disks)


def test_lehmer_roots():
    disks = complex_roots(LEHMER)
    assert len(disks) == 10
    real_big = max(abs(d.center) for d in disks)
    assert abs(real_big - mpmath.mpf("1.17628081825991750654")) < 1e-15


def test_not_squarefree():
    with pytest.raises(NotSquarefreeError):
        complex_roots(parse_poly("(x-1)^2"))


@given(polys(6, 6))
@settings(max_examples=150, deadline=None)
def test_disks_are_disjoint_and_small(f):
    from orbit_heights.poly import is_squarefree

    assume(is_squarefree(f))
    disks = complex_roots(f, 128)
    assert len(disks) == f.degree
    assert all(d.radius <= mpmath.mpf(2) ** -64 for d in disks)
    with mpmath.workdps(40):
        ref = mpmath.polyroots(list(reversed(f.coeffs)), maxsteps=500, extraprec=300)
    for r in ref:
        assert sum(1 for d in disks if abs(d.center - r) <= d.radius + 1e-30) == 1


# --- Mahler measure ----------------------------------------------------------------


def test_mahler_examples():
    assert mahler_measure(parse_poly("x-2")).contains(2)
    m = mahler_measure(LEHMER)
    assert abs(m.mid - mpmath.mpf("1.1762808182599175065")) < 1e-15
    one = mahler_measure(parse_poly("x^4-x^3+x^2-x+1"))
    assert one.lo == one.hi == 1


def test_mahler_relative_width():
    for bits in (64, 128, 256):
        m = mahler_measure(LEHMER, bits)
        assert m.width / m.mid <= mpmath.mpf(2) ** (-bits // 4)


def test_mahler_content_and_zero():
    assert mahler_measure(parse_poly("6x^2+6")).contains(6)
    with pytest.raises(ValueError):
        mahler_measure(Poly())


@given(polys(), polys())
@settings(max_examples=500, deadline=None)
def test_mahler_multiplicative(f, g):
    assert props.check_mahler_multiplicative(f, g)


@given(polys())
@settings(max_examples=500, deadline=None)
def test_mahler_graeffe(f):
    assert props.check_mahler_graeffe(f)


@given(polys(6, 6))
@settings(max_examples=200, deadline=None)
def test_mahler_against_polyroots(f):
    assert props.check_mahler_oracle(f)


def test_graeffe_squares_roots():
    f = parse_poly("x^2-3x+2")  # roots 1, 2
    assert props.graeffe(f) == parse_poly("x^2-5x+4")  # roots 1, 4
    assert props.graeffe(parse_poly("x-2")) == parse_poly("x-4")


# --- Weil heights -------------------------------------------------------------------


def test_weil_examples():
    assert abs(weil_height(AlgebraicNumber.from_rational(2)).mid - math.log(2)) < 1e-30
    h = weil_height(AlgebraicNumber(cyclotomic(12)))
    assert h.lo == h.hi == 0
    h = weil_height(AlgebraicNumber(parse_poly("5x^2-2x+1")))
    assert abs(h.mid - math.log(5) / 2) < 1e-30
    assert weil_height(AlgebraicNumber(parse_poly("x"))).hi == 0


@given(st.fractions(-1000, 1000, max_denominator=1000))
def test_weil_height_of_rationals(x):
    assume(x != 0)
    h = weil_height(AlgebraicNumber.from_rational(x))
    with mpmath.workprec(200):
        assert h.contains(mpmath.log(max(abs(x.numerator), x.denominator)))


def test_algebraic_number_validation():
    with pytest.raises(ValueError):
        AlgebraicNumber(parse_poly("x^2-1"))
    with pytest.raises(ValueError):
        AlgebraicNumber(parse_poly("2x^2+4"))
    with pytest.raises(ValueError):
        AlgebraicNumber(parse_poly("-x^2-1"))
    disk = RootDisk(mpmath.mpc(0, 1), mpmath.mpf("0.1"))
    assert AlgebraicNumber(parse_poly("x^2+1"), disk).value() == disk.center
    with pytest.raises(ValueError):
        AlgebraicNumber(parse_poly("x^2+1"), RootDisk(mpmath.mpc(0, 0), mpmath.mpf(2)))


@pytest.mark.parametrize("m", range(1, 31))
def test_kronecker(m):
    assert props.kronecker(m)


# --- orbit heights ---------------------------------------------------------------------


def test_orbit_height_examples():
    assert abs(orbit_height(C3_TABLE, parse_poly("x^2+1")).mid - math.log(5)) < 1e-30
    assert abs(orbit_height(ZAGIER, cyclotomic(10)).mid - mpmath.mpf("0.24060591252980172375")) < 1e-18
    h = orbit_height(C3_TABLE, parse_poly("x"))
    assert h.lo == h.hi == 0


def test_orbit_height_with_infinity():
    # z -> 2/z sends 0 to infinity; both ends have height 0
    G = generate_group([MobiusMap(0, 2, 1, 0)])
    assert orbit_height(G, parse_poly("x")).hi == 0
    assert abs(orbit_height(G, parse_poly("x-1")).mid - math.log(2)) < 1e-30


def test_mahler_orbit_product_examples():
    m = mahler_orbit_product(C3_TABLE, parse_poly("x^2+1"))
    assert m.lo == m.hi == 25
    f = parse_poly("x^3-x-1")
    assert mahler_orbit_product(TRIVIAL, f) == mahler_measure(f)
    m = mahler_orbit_product(ZAGIER, cyclotomic(10))
    with mpmath.workprec(200):
        assert abs(m.mid - ((1 + mpmath.sqrt(5)) / 2) ** 2) < 1e-30
    with pytest.raises(OrbitHitsInfinity):
        mahler_orbit_product(C3_TABLE, parse_poly("3x-1"))


@given(irreducible_polys(), st.sampled_from([g for _, g, _ in props.table_groups()]))
@settings(max_examples=150, deadline=None)
def test_orbit_height_consistency_and_invariance(f, G):
    h = orbit_height(G, f)
    assert h.lo >= 0
    try:
        m = mahler_orbit_product(G, f)
    except OrbitHitsInfinity:
        return
    assert abs(f.degree * h.mid - mpmath.log(m.mid)) < 1e-10
    for s in G:
        g = pullback_minpoly(f, s)
        assert abs(orbit_height(G, g).mid - h.mid) < 1e-25


def test_maximal_root():
    a = maximal_root(parse_poly("(z^2-z+1)^3-(z^2-z)^2"))
    assert abs(mpmath.log(abs(a)) - mpmath.mpf("0.4217993614")) < 1e-9
    assert a.imag >= 0
    assert maximal_root(parse_poly("x^2-2")).real > 0
