from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from ultrahom.angles import (
    PI,
    ArcError,
    EmptyArcError,
    GenAngle,
    PiOracle,
    canonicalize,
    class_of,
    cmp_angles,
    format_angle,
    in_ccw_arc,
    parse_angle,
    rational_in_arc,
    rotate,
    s2_arrow,
    s3_arrow,
    shorter_arc_ccw,
    simplest_between,
)

from .oracles import (
    PI as DPI,
    TWO_PI as DTWO_PI,
    dec,
    mod_two_pi,
    s2_arrow_ref,
    s2_class_ref,
    s3_arrow_ref,
    s3_class_ref,
    simplest_brute,
    value,
)

rationals = st.fractions(min_value=-400, max_value=400, max_denominator=64)
small = st.fractions(min_value=-8, max_value=8, max_denominator=12)
angles = st.builds(GenAngle, small, small)


EPS = dec(Fraction(1, 10**40))


# --- pi enclosure ------------------------------------------------------------------

def test_seed_enclosure_contains_pi():
    o = PiOracle()
    assert dec(o.lo) < DPI < dec(o.hi)


def test_refinement_shrinks_and_stays_certified():
    o = PiOracle()
    widths = [o.width]
    for _ in range(4):
        o.refine()
        widths.append(o.width)
        assert dec(o.lo) < DPI < dec(o.hi)
    assert all(b < a for a, b in zip(widths, widths[1:]))


def test_precision_floor(monkeypatch):
    monkeypatch.setenv("FORGE_PI_PRECISION", "40")
    o = PiOracle()
    assert o.width <= Fraction(1, 10**40)
    assert dec(o.lo) < DPI < dec(o.hi)


def test_sign_forces_refinement_near_pi():
    o = PiOracle()
    # 103993/33102 sits just below pi, inside the seed enclosure
    assert o.sign(Fraction(-103993, 33102), Fraction(1)) > 0
    assert o.refinements >= 1
    assert o.sign(Fraction(-355, 113), Fraction(1)) < 0


@given(rationals, rationals)
def test_sign_matches_decimal(a, b):
    v = value(a, b)
    assume(abs(v) > EPS)
    assert PiOracle().sign(a, b) == (1 if v > 0 else -1)


# --- text form -------------------------------------------------------------------

@pytest.mark.parametrize("text,a,b", [
    ("7/2+(-1)*pi", Fraction(7, 2), -1),
    ("3", 3, 0),
    ("2/3*pi", 0, Fraction(2, 3)),
    ("pi", 0, 1),
    ("-pi", 0, -1),
    ("-1/2-3*pi", Fraction(-1, 2), -3),
    ("1+pi", 1, 1),
])
def test_parse_angle(text, a, b):
    assert parse_angle(text) == GenAngle(a, b)


@given(angles)
def test_format_parse_roundtrip(x):
    assert parse_angle(format_angle(x)) == x


@pytest.mark.parametrize("bad", ["", "pi*2", "1+", "x", "pi+pi"])
def test_parse_angle_rejects(bad):
    with pytest.raises(ValueError):
        parse_angle(bad)


# --- canonical values, comparisons -------------------------------------------------

def test_canonicalize_examples():
    assert canonicalize(7) == GenAngle(7, -2)
    assert canonicalize(GenAngle(0, 2)) == 0
    assert canonicalize(GenAngle(1, -4)) == 1


@given(angles)
def test_canonical_value_in_range_and_congruent(x):
    c = canonicalize(x)
    v = value(c.a, c.b)
    assert 0 <= v < DTWO_PI
    k = (c.b - x.b) / 2
    assert c.a == x.a and k.denominator == 1


@given(angles, angles)
def test_cmp_antisymmetric_and_matches_decimal(x, y):
    c = cmp_angles(x, y)
    assert cmp_angles(y, x) == -c
    vx, vy = value(x.a, x.b), value(y.a, y.b)
    assert c == (vx > vy) - (vx < vy)


@given(angles)
def test_rotation_three_times_is_identity_on_circle(x):
    assert canonicalize(rotate(x, 3)) == canonicalize(x)


# --- arcs and arrows ---------------------------------------------------------------

def test_degenerate_arcs():
    with pytest.raises(ArcError):
        in_ccw_arc(1, 2, 2)
    with pytest.raises(ArcError):
        shorter_arc_ccw(0, PI)
    with pytest.raises(ArcError):
        rational_in_arc(3, GenAngle(3, 2))


@given(rationals, rationals)
def test_s2_arrow_matches_reference(x, y):
    assume(x != y)
    d = mod_two_pi(dec(y) - dec(x))
    assume(abs(d - DPI) > EPS)
    assert s2_arrow(x, y) == s2_arrow_ref(x, y)


@given(rationals, rationals)
def test_s3_arrow_matches_reference(x, y):
    assert s3_arrow(x, y) == s3_arrow_ref(x, y)


@given(rationals, rationals)
def test_s2_arrow_is_a_tournament_relation(x, y):
    assume(x != y)
    assert s2_arrow(x, y) != s2_arrow(y, x)


@given(rationals, rationals)
def test_s3_arrow_asymmetric(x, y):
    assert not (s3_arrow(x, y) and s3_arrow(y, x))


def test_incomparable_pair_in_s3():
    assert not s3_arrow(0, 3) and not s3_arrow(3, 0)
    assert s2_arrow(0, 3)


@given(rationals)
def test_classes_match_reference(q):
    assert class_of(q, "S2") == s2_class_ref(q)
    assert class_of(q, "S3") == s3_class_ref(q)


def test_boundary_point_has_no_class():
    with pytest.raises(ValueError):
        class_of(GenAngle(0, Fraction(1, 2)), "S2")
    with pytest.raises(ValueError):
        class_of(GenAngle(0, Fraction(7, 6)), "S3")


# --- simplest rationals ------------------------------------------------------------

def test_simplest_between_examples():
    assert simplest_between(GenAngle(0, 1), GenAngle(0, Fraction(3, 2))) == 4
    assert simplest_between(Fraction(1, 3), Fraction(1, 2)) == Fraction(2, 5)
    assert simplest_between(-PI, Fraction(1, 5)) == 0
    assert simplest_between(GenAngle(-4), GenAngle(0, -1)) == Fraction(-7, 2)  # open at -4
    with pytest.raises(ArcError):
        simplest_between(2, 2)


@settings(max_examples=150)
@given(angles, st.fractions(min_value=Fraction(1, 20), max_value=3, max_denominator=20))
def test_simplest_between_matches_brute_force(lo, width):
    hi = lo + width
    got = simplest_between(lo, hi)
    assert got == simplest_brute(value(lo.a, lo.b), value(hi.a, hi.b))


def test_rational_in_arc_examples():
    assert rational_in_arc(0, PI, ("S2", "A")) == 2
    assert rational_in_arc(2, 3, ("S3", "A")) == Fraction(5, 2)
    assert rational_in_arc(2, 3) == Fraction(5, 2)
    with pytest.raises(EmptyArcError):
        rational_in_arc(GenAngle(0, Fraction(-1, 4)), GenAngle(0, Fraction(1, 4)), ("S2", "A"))


@settings(max_examples=100)
@given(angles, angles, st.sampled_from([None, ("S2", "A"), ("S2", "B"), ("S3", "A"), ("S3", "B"), ("S3", "C")]))
def test_rational_in_arc_lands_inside(s, t, flt):
    assume(canonicalize(s) != canonicalize(t))
    try:
        q = rational_in_arc(s, t, flt)
    except EmptyArcError:
        return
    assert in_ccw_arc(q, s, t)
    if flt is not None:
        assert class_of(q, flt[0]) == flt[1]


def test_rational_in_arc_independent_of_enclosure_state():
    coarse = PiOracle()
    fine = PiOracle(floor_digits=50)
    s, t = GenAngle(1, Fraction(1, 3)), GenAngle(0, Fraction(5, 4))
    assert rational_in_arc(s, t, oracle=coarse) == rational_in_arc(s, t, oracle=fine)


NEAR_PI = [Fraction(355, 113), Fraction(103993, 33102), Fraction(104348, 33215),
           Fraction(833719, 265381), Fraction(10**7 + 1, 3)]


@pytest.mark.parametrize("q", NEAR_PI)
def test_near_boundary_inputs_agree_with_reference(q):
    # convergents of pi land within the float filter's margin and force the exact path
    for x in (q, q / 2, q * Fraction(7, 6), -q, 2 * q):
        assert class_of(x, "S2") == s2_class_ref(x)
        assert class_of(x, "S3") == s3_class_ref(x)
        assert s2_arrow(0, x) == s2_arrow_ref(0, x)
        assert s3_arrow(0, x) == s3_arrow_ref(0, x)
        assert s3_arrow(x, 0) == s3_arrow_ref(x, 0)
