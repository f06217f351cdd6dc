from fractions import Fraction

import pytest
from hypothesis import given

from hktlie.scalar import ONE, SQRT2, ZERO, Scalar, ScalarSyntaxError, as_scalar, parse_scalar
from strategies import nonzero_scalars, scalars


def test_half_sqrt2_squares_to_half():
    h = SQRT2 / 2
    assert h * h == Scalar(Fraction(1, 2))
    assert (h * h).is_rational()


def test_sqrt2_is_irrational_and_positive():
    assert not SQRT2.is_rational()
    assert SQRT2 > 1 and SQRT2 < Scalar(Fraction(3, 2))
    assert SQRT2 * SQRT2 == 2


def test_sign_of_nearly_cancelling_values():
    # 99/70 is a convergent of sqrt2 from above, 140/99 from below
    assert (SQRT2 - Scalar(Fraction(99, 70))).sign() == -1
    assert (SQRT2 - Scalar(Fraction(140, 99))).sign() == 1
    assert (Scalar(3, -2)).sign() == 1  # 3 - 2 sqrt2 > 0
    assert (Scalar(-3, 2)).sign() == -1


def test_inverse_uses_conjugate():
    x = Scalar(1, 1)
    assert x.inverse() == Scalar(-1, 1)
    assert x * x.inverse() == ONE


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_mixed_operands():
    assert 1 + SQRT2 == Scalar(1, 1)
    assert 2 - SQRT2 == Scalar(2, -1)
    assert Fraction(1, 2) * SQRT2 == Scalar(0, Fraction(1, 2))
    assert 1 / SQRT2 == SQRT2 / 2
    assert SQRT2 ** 3 == 2 * SQRT2
    assert SQRT2 ** -2 == Scalar(Fraction(1, 2))


@pytest.mark.parametrize(
    "text, value",
    [
        ("0", ZERO),
        ("-3", Scalar(-3)),
        ("7/4", Scalar(Fraction(7, 4))),
        ("0+1/2*sqrt2", SQRT2 / 2),
        ("1-1*sqrt2", Scalar(1, -1)),
        (" -2/3 + 5 * sqrt2 ", Scalar(Fraction(-2, 3), 5)),
    ],
)
def test_parse(text, value):
    assert parse_scalar(text) == value


@pytest.mark.parametrize("text", ["", "1/0", "sqrt2", "1+sqrt2", "1.5", "2/3/4", "1+2*sqrt3", "x"])
def test_parse_rejects(text):
    with pytest.raises(ScalarSyntaxError):
        parse_scalar(text)


def test_as_scalar_rejects_floats():
    with pytest.raises(TypeError):
        as_scalar(0.5)


def test_literal_forms():
    assert Scalar(Fraction(3, 4)).literal() == "3/4"
    assert Scalar(0, Fraction(-1, 4)).literal() == "0-1/4*sqrt2"
    assert Scalar(2, 1).literal() == "2+1*sqrt2"


@given(scalars)
def test_literal_round_trip(x):
    assert parse_scalar(x.literal()) == x


@given(scalars, scalars, scalars)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO


@given(nonzero_scalars)
def test_field_inverse(a):
    assert a * a.inverse() == ONE
    assert a / a == ONE


@given(scalars, scalars)
def test_order_matches_float(a, b):
    if abs(a.approx() - b.approx()) > 1e-9:
        assert (a < b) == (a.approx() < b.approx())


@given(scalars, scalars)
def test_conjugation_is_a_ring_map(a, b):
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a * a.conjugate()).is_rational()
    assert a.norm() == (a * a.conjugate()).rat


@given(scalars)
def test_hash_consistent_with_equality(a):
    b = parse_scalar(a.literal())
    assert hash(a) == hash(b)
    if a.is_rational():
        assert a == a.rat
