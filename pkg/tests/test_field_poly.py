from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ncline import Field, FieldError, NcPolynomial, QQ

F7 = Field(7)


def test_field_parse_and_names():
    assert Field.parse("Q") == QQ
    assert Field.parse("F5").p == 5
    assert F7.name == "F7"
    with pytest.raises(FieldError):
        Field.parse("R")
    with pytest.raises(FieldError):
        Field(9)
    with pytest.raises(FieldError):
        Field(2)


def test_field_coercion():
    assert QQ("3/4") == Fraction(3, 4)
    assert QQ(Fraction(4, 2)) == 2
    assert F7(Fraction(1, 2)) == 4
    assert F7(-1) == 6
    assert F7.to_str(6) == "-1"
    assert QQ.to_json(Fraction(1, 3)) == "1/3"
    assert list(Field(3).elements()) == [0, 1, 2]


def test_inverse():
    assert F7.inv(3) * 3 % 7 == 1
    assert QQ.inv(4) == Fraction(1, 4)
    with pytest.raises(ZeroDivisionError):
        F7.inv(0)


def test_polynomial_arithmetic():
    x = NcPolynomial.word(QQ, (0,))
    y = NcPolynomial.word(QQ, (1,))
    comm = x * y - y * x
    assert comm.terms == {(0, 1): 1, (1, 0): -1}
    assert (comm + y * x).terms == {(0, 1): 1}
    assert (comm - comm).is_zero()
    assert comm.homogeneous_degree((1, 1)) == 2
    assert (x + x * y).homogeneous_degree((1, 1)) is None
    assert comm.scale(0).is_zero()
    assert NcPolynomial.one(QQ) * x == x


def test_coefficients_normalized_mod_p():
    p = NcPolynomial(F7, {(0,): 8, (1,): 7})
    assert p.terms == {(0,): 1}


def test_mixed_fields_rejected():
    with pytest.raises(ValueError):
        NcPolynomial.word(QQ, (0,)) + NcPolynomial.word(F7, (0,))


terms = st.dictionaries(
    st.lists(st.integers(0, 2), min_size=0, max_size=3).map(tuple),
    st.integers(-3, 3),
    max_size=4,
)


@settings(max_examples=60, deadline=None)
@given(terms, terms, terms)
def test_multiplication_associative_and_distributive(a, b, c):
    for F in (QQ, F7):
        A, B, C = (NcPolynomial(F, t) for t in (a, b, c))
        assert (A * B) * C == A * (B * C)
        assert A * (B + C) == A * B + A * C
