from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heckex.scalars import (
    I,
    ONE,
    ZERO,
    RadScalar,
    scalar_from_json,
    scalar_to_json,
    sqrt_pos_rational,
    squarefree_decompose,
)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
radicands = st.sampled_from([1, 2, 3, 5, 6, 8, 12])


@st.composite
def scalars(draw):
    terms = draw(st.dictionaries(radicands, st.tuples(fractions, fractions), max_size=3))
    return RadScalar.from_terms(terms)


@given(scalars(), scalars(), scalars())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + ZERO == a and a * ONE == a
    assert a - a == ZERO


@given(scalars(), scalars())
def test_conjugation_is_multiplicative(a, b):
    assert (a * b).conj() == a.conj() * b.conj()
    assert a.conj().conj() == a


@given(scalars())
def test_abs_squared_is_nonnegative_real(a):
    z = a.abs_squared()
    assert z.conj() == z
    assert abs(z.to_complex() - abs(a.to_complex()) ** 2) < 1e-9


@settings(max_examples=200)
@given(scalars(), scalars())
def test_division_inverts_multiplication(a, b):
    if b.is_zero():
        return
    assert (a * b) / b == a


@given(st.fractions(min_value=Fraction(1, 30), max_value=50, max_denominator=30))
def test_square_root_squares_back(q):
    r = sqrt_pos_rational(q)
    assert r * r == RadScalar(q)


@given(scalars())
def test_json_round_trip(a):
    assert scalar_from_json(scalar_to_json(a)) == a


def test_radicands_reduce_to_squarefree():
    assert squarefree_decompose(72) == (6, 2)
    assert sqrt_pos_rational(8) == RadScalar.from_terms({2: 2})
    assert sqrt_pos_rational(Fraction(1, 2)) == RadScalar.from_terms({2: Fraction(1, 2)})


def test_conjugate_radicals_multiply_to_rational():
    root2 = sqrt_pos_rational(2)
    assert (ONE + root2) * (ONE - root2) == RadScalar(-1)
    assert I * I == RadScalar(-1)


def test_division_by_multi_term_scalar():
    root2, root3 = sqrt_pos_rational(2), sqrt_pos_rational(3)
    x = ONE + root2 + root3 + I * root2 * root3
    assert (ONE / x) * x == ONE
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_equality_is_exact_not_numeric():
    assert sqrt_pos_rational(2) != RadScalar(Fraction(14142135623730951, 10**16))


def test_inexact_inputs_are_refused():
    with pytest.raises(ValueError):
        RadScalar(0.1)
    with pytest.raises(ValueError):
        sqrt_pos_rational(0)
    with pytest.raises(ValueError):
        scalar_from_json([{"rad": 0, "re": "1"}])
