"""Tests for the scalars module."""

from fractions import Fraction

import pytest

from molq.scalars import Field, GaussianRational, format_scalar, parse_scalar


def test_parse_rationals():
    """Test parsing integers and fractions."""
    assert parse_scalar("3") == Fraction(3)
    assert parse_scalar("-3/4") == Fraction(-3, 4)
    assert parse_scalar("6/8") == Fraction(3, 4)


def test_parse_gaussian_forms():
    """Test the a+bi, bi and i forms."""
    f = Field.GAUSSIAN
    assert parse_scalar("1/2+3i", f) == GaussianRational(Fraction(1, 2), 3)
    assert parse_scalar("1-i", f) == GaussianRational(1, -1)
    assert parse_scalar("-i", f) == GaussianRational(0, -1)
    assert parse_scalar("2/3i", f) == GaussianRational(0, Fraction(2, 3))
    assert parse_scalar("5", f) == GaussianRational(5)


def test_parse_rejects_malformed():
    """Test malformed scalars raise ValueError."""
    for text in ["", "1.5", "abc", "1/0", "1++i"]:
        with pytest.raises(ValueError):
            parse_scalar(text, Field.GAUSSIAN)


def test_parse_imaginary_in_rational_field():
    """Test an imaginary scalar is not a rational."""
    with pytest.raises(ValueError):
        parse_scalar("1+i", Field.RATIONAL)


def test_format_scalar():
    """Test canonical text forms."""
    assert format_scalar(Fraction(3, 4)) == "3/4"
    assert format_scalar(Fraction(-2)) == "-2"
    assert format_scalar(GaussianRational(0, 1)) == "i"
    assert format_scalar(GaussianRational(0, -1)) == "-i"
    assert format_scalar(GaussianRational(1, 2)) == "1+2i"
    assert format_scalar(GaussianRational(3, Fraction(-3, 4))) == "3-3/4i"
    assert format_scalar(GaussianRational(7)) == "7"


def test_format_parse_agree():
    """Test formatted scalars parse back to the same value."""
    values = [GaussianRational(Fraction(1, 3), Fraction(-5, 2)), GaussianRational(0, 4)]
    for v in values:
        assert parse_scalar(format_scalar(v), Field.GAUSSIAN) == v


def test_gaussian_arithmetic():
    """Test field operations in Q(i)."""
    i = GaussianRational(0, 1)
    assert i * i == -1
    a = GaussianRational(1, 2)
    b = GaussianRational(3, -1)
    assert a + b == GaussianRational(4, 1)
    assert a - b == GaussianRational(-2, 3)
    assert a * b == GaussianRational(5, 5)
    assert (a / b) * b == a
    assert 1 / i == -i
    assert 2 - i == GaussianRational(2, -1)


def test_gaussian_division_by_zero():
    """Test division by zero raises."""
    with pytest.raises(ZeroDivisionError):
        GaussianRational(1, 1) / GaussianRational(0)


def test_conjugate_and_norm():
    """Test conjugation and the norm x * conj(x)."""
    a = GaussianRational(3, 4)
    assert a.conjugate() == GaussianRational(3, -4)
    assert a.norm() == 25
    assert a * a.conjugate() == 25
    assert Fraction(2, 3).conjugate() == Fraction(2, 3)


def test_real_gaussian_equals_fraction():
    """Test real Gaussian rationals compare and hash like fractions."""
    assert GaussianRational(Fraction(1, 2)) == Fraction(1, 2)
    assert hash(GaussianRational(Fraction(1, 2))) == hash(Fraction(1, 2))
    assert not GaussianRational(0)
    assert GaussianRational(0, 1)


def test_field_coerce():
    """Test coercion into each field."""
    assert Field.RATIONAL.coerce(2) == Fraction(2)
    assert Field.RATIONAL.coerce(GaussianRational(3)) == Fraction(3)
    assert isinstance(Field.GAUSSIAN.coerce(2), GaussianRational)
    assert Field.GAUSSIAN.coerce("1+i") == GaussianRational(1, 1)
    with pytest.raises(ValueError):
        Field.RATIONAL.coerce(GaussianRational(1, 1))


def test_field_tags():
    """Test field tags and units."""
    assert Field.from_tag("Q") is Field.RATIONAL
    assert Field.from_tag("Qi") is Field.GAUSSIAN
    assert Field.GAUSSIAN.one == 1
    assert Field.RATIONAL.zero == 0
    with pytest.raises(ValueError):
        Field.from_tag("R")
