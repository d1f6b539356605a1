"""Exact scalar and ball arithmetic.

The scalar type must behave like the field Q(sqrt(d)) restricted to a single
radicand per value, and balls must be genuine enclosures: every sampled
member of the operand intervals must land inside the result interval.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ietpc import (
    Ball,
    DivisionByZero,
    ExactNumber,
    IncompatibleRadicands,
    compare,
    format_scalar,
    parse_scalar,
    to_ball,
)
from ietpc.numeric import dyadic_ceil

fracs = st.fractions(min_value=-50, max_value=50, max_denominator=400)
radicands = st.sampled_from([2, 3, 5, 7])


@st.composite
def exact_numbers(draw, d=None):
    rat = draw(fracs)
    if d is None:
        d = draw(st.sampled_from([0, 2, 3, 5, 7]))
    coef = draw(fracs) if d else Fraction(0)
    return ExactNumber(rat, coef, d)


@st.composite
def exact_pairs(draw):
    """Two scalars sharing a radicand, so every ring operation is defined."""
    d = draw(st.sampled_from([0, 2, 3, 5, 7]))
    return draw(exact_numbers(d=d)), draw(exact_numbers(d=d))


@st.composite
def exact_triples(draw):
    d = draw(st.sampled_from([0, 2, 3, 5, 7]))
    return tuple(draw(exact_numbers(d=d)) for _ in range(3))


# ------------------------------------------------------------- ring laws


@given(exact_pairs())
def test_add_mul_commute(pair):
    a, b = pair
    assert a + b == b + a
    assert a * b == b * a


@given(exact_triples())
def test_associativity_distributivity(triple):
    a, b, c = triple
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(exact_numbers())
def test_additive_inverse(a):
    assert a - a == ExactNumber(0)
    assert a + (-a) == ExactNumber(0)
    assert -(-a) == a


@given(exact_pairs())
def test_division_inverts_multiplication(pair):
    a, b = pair
    if b == 0:
        with pytest.raises(DivisionByZero):
            a / b
    else:
        assert (a / b) * b == a


@given(fracs, fracs, radicands)
def test_conjugate_norm_is_rational(rat, coef, d):
    x = ExactNumber(rat, coef, d)
    conj = ExactNumber(rat, -coef, d)
    prod = x * conj
    assert prod.is_rational
    assert prod.to_fraction() == rat * rat - coef * coef * d


def test_radicand_normalization():
    # sqrt(8) = 2*sqrt(2), sqrt(4) = 2, sqrt(45) = 3*sqrt(5)
    assert ExactNumber(0, 1, 8) == ExactNumber(0, 2, 2)
    assert ExactNumber(0, 1, 8).radicand == 2
    assert ExactNumber(0, 1, 4) == ExactNumber(2)
    assert ExactNumber(0, 1, 4).is_rational
    assert ExactNumber(0, 1, 45) == ExactNumber(0, 3, 5)
    assert ExactNumber.sqrt(9).to_fraction() == 3


def test_sqrt_squares_back():
    for d in (2, 3, 5, 7, 11, 13):
        r = ExactNumber.sqrt(d)
        assert r * r == ExactNumber(d)
        assert not r.is_rational


def test_mixed_radicands_rejected():
    with pytest.raises(IncompatibleRadicands):
        ExactNumber.sqrt(2) + ExactNumber.sqrt(3)
    with pytest.raises(IncompatibleRadicands):
        ExactNumber.sqrt(2) * ExactNumber.sqrt(3)
    # but a rational may join any radicand
    assert ExactNumber.sqrt(2) + 1 == ExactNumber(1, 1, 2)


def test_to_fraction_requires_rational():
    with pytest.raises(ValueError):
        ExactNumber.sqrt(2).to_fraction()


# ------------------------------------------------------------- ordering


@given(exact_pairs())
def test_trichotomy(pair):
    a, b = pair
    rels = [a < b, a == b, a > b]
    assert rels.count(True) == 1
    assert compare(a, b) == (-1 if a < b else (0 if a == b else 1))
    assert compare(b, a) == -compare(a, b)


@given(exact_pairs())
def test_order_agrees_with_enclosures(pair):
    """If 120-bit enclosures separate, the exact comparison must match."""
    a, b = pair
    ba, bb = to_ball(a, 120), to_ball(b, 120)
    if ba.hi < bb.lo:
        assert a < b
    elif bb.hi < ba.lo:
        assert b < a


@given(exact_numbers())
def test_sign_and_abs(a):
    s = a.sign()
    assert s in (-1, 0, 1)
    assert (s == 0) == (a == 0)
    assert abs(a) == (a if s >= 0 else -a)
    assert abs(a) >= 0


@given(exact_pairs())
def test_hash_consistent_with_eq(pair):
    a, b = pair
    if a == b:
        assert hash(a) == hash(b)


def test_float_conversion_close():
    phi = (ExactNumber(1) + ExactNumber.sqrt(5)) / 2
    # float() routes through a finite-precision ball, so only ask for ~12 digits
    assert abs(float(phi) - 1.6180339887498949) < 1e-12


# ------------------------------------------------------------- text forms


@given(exact_numbers())
def test_parse_format_round_trip(x):
    assert parse_scalar(format_scalar(x)) == x


def test_parse_examples():
    assert parse_scalar("1/3") == ExactNumber(Fraction(1, 3))
    assert parse_scalar("-7") == ExactNumber(-7)
    assert parse_scalar("(3-1*sqrt(5))/2") == ExactNumber(
        Fraction(3, 2), Fraction(-1, 2), 5
    )
    assert parse_scalar("(0+1*sqrt(2))/1") == ExactNumber.sqrt(2)


@pytest.mark.parametrize(
    "bad",
    [
        "1/0",
        "(1+2*sqrt(5))/0",
        "sqrt(5)",
        "1.5",
        "",
        "(4-(1+1*sqrt(5))/2)/1",  # nested expressions are not scalars
        "one third",
    ],
)
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_scalar(bad)


def test_format_is_canonical():
    assert format_scalar(Fraction(2, 4)) == "1/2"
    assert format_scalar(ExactNumber(Fraction(3, 2), Fraction(-1, 2), 5)) == (
        "(3-1*sqrt(5))/2"
    )


# ------------------------------------------------------------- balls

dyadics = st.builds(
    lambda m, e: Fraction(m, 1 << e),
    st.integers(min_value=-(1 << 20), max_value=1 << 20),
    st.integers(min_value=0, max_value=24),
)
small_dyadics = st.builds(
    lambda m, e: Fraction(m, 1 << e),
    st.integers(min_value=0, max_value=1 << 10),
    st.integers(min_value=0, max_value=16),
)
balls = st.builds(Ball, dyadics, small_dyadics)


def _members(b: Ball):
    return (b.lo, b.center, b.hi)


@given(balls, balls)
def test_ball_add_sub_enclose(x, y):
    s = x + y
    d = x - y
    for u in _members(x):
        for v in _members(y):
            assert s.lo <= u + v <= s.hi
            assert d.lo <= u - v <= d.hi


@given(balls, st.integers(min_value=-8, max_value=8), st.integers(min_value=0, max_value=6))
def test_ball_scale_encloses(x, m, e):
    s = Fraction(m, 1 << e)
    scaled = x.scale(s)
    for u in _members(x):
        assert scaled.lo <= u * s <= scaled.hi


@given(balls, balls)
def test_ball_predicates_consistent(x, y):
    if x.strictly_below(y) or x.strictly_above(y):
        assert not x.overlaps(y)
    else:
        assert x.overlaps(y)
    if x.contains_ball(y):
        assert x.overlaps(y) or y.radius == 0
        for v in _members(y):
            assert x.contains(v)


def test_ball_validation():
    with pytest.raises(ValueError):
        Ball(Fraction(0), Fraction(-1, 2))
    with pytest.raises(ValueError):
        Ball(Fraction(1, 3), Fraction(0))  # non-dyadic center
    with pytest.raises(ValueError):
        Ball.from_endpoints(Fraction(1), Fraction(0))
    b = Ball.from_endpoints(Fraction(1, 4), Fraction(3, 4))
    assert b.lo == Fraction(1, 4) and b.hi == Fraction(3, 4)
    assert Ball.point(2).radius == 0


@given(exact_numbers(), st.integers(min_value=4, max_value=160))
def test_to_ball_encloses_tightly(x, bits):
    b = to_ball(x, bits)
    assert b.contains(x)
    assert b.radius <= Fraction(1, 1 << bits)


@settings(max_examples=60)
@given(st.fractions(min_value=-10, max_value=10, max_denominator=10**6),
       st.integers(min_value=1, max_value=80))
def test_dyadic_ceil_properties(x, bits):
    c = dyadic_ceil(x, bits)
    assert c >= x
    assert c - x < Fraction(1, 1 << bits)
    assert ((1 << bits) * c).denominator == 1
