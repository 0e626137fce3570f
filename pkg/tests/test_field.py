import pytest
from hypothesis import given, strategies as st

from coded_lea.field import (
    DEFAULT_PRIME,
    FieldError,
    degree,
    fp_inv,
    is_prime,
    lagrange_interpolate,
    poly_eval,
    poly_mul,
)

P = DEFAULT_PRIME
elems = st.integers(min_value=0, max_value=P - 1)
nonzero = st.integers(min_value=1, max_value=P - 1)


def test_default_prime():
    assert P == 2**31 - 1
    assert is_prime(P)
    assert not is_prime(P - 2)
    assert [q for q in range(30) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@pytest.mark.parametrize("a, p, expected", [(3, 7, 5), (1, 7, 1), (6, 7, 6)])
def test_fp_inv_examples(a, p, expected):
    assert fp_inv(a, p) == expected
    assert a * expected % p == 1


def test_fp_inv_zero():
    with pytest.raises(ZeroDivisionError, match="no inverse of zero"):
        fp_inv(0, 7)
    with pytest.raises(ZeroDivisionError):
        fp_inv(14, 7)


def test_poly_eval_examples():
    # u(z) = z*(X2 - X1) + X1 with X1 = 1, X2 = 2
    assert poly_eval([1, 1], 3, 101) == 4
    assert poly_eval([17, 5, 9], 0, 101) == 17
    assert poly_eval([], 42, 101) == 0


def test_interpolate_two_points_gives_line():
    x1, x2 = 11, 29
    assert lagrange_interpolate([(0, x1), (1, x2)], 101) == [x1, (x2 - x1) % 101]


def test_interpolate_single_point():
    assert lagrange_interpolate([(5, 9)], 101) == [9]


def test_interpolate_repeated_node():
    with pytest.raises(FieldError, match="repeated interpolation node"):
        lagrange_interpolate([(1, 2), (1, 3)])
    with pytest.raises(FieldError, match="repeated"):
        lagrange_interpolate([(1, 2), (102, 3)], 101)


@given(st.lists(st.tuples(elems, elems), min_size=1, max_size=12, unique_by=lambda t: t[0]))
def test_interpolation_round_trip(points):
    poly = lagrange_interpolate(points)
    assert degree(poly) <= len(points) - 1
    for x, y in points:
        assert poly_eval(poly, x) == y


@given(st.lists(elems, min_size=1, max_size=6), st.lists(elems, min_size=1, max_size=6), elems)
def test_poly_mul_matches_pointwise(a, b, z):
    assert poly_eval(poly_mul(a, b), z) == poly_eval(a, z) * poly_eval(b, z) % P


@given(elems, elems, elems)
def test_field_axioms(a, b, c):
    assert (a * b % P) * c % P == a * (b * c % P) % P
    assert a * ((b + c) % P) % P == (a * b + a * c) % P


@given(nonzero)
def test_inverse(a):
    assert a * fp_inv(a) % P == 1
