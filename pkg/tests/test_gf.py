import itertools

import pytest
from hypothesis import given, strategies as st

from polarfly.errors import NotPrime, NotPrimePower, ZeroInverse
from polarfly.gf import (FieldSpec, field_for_order, is_irreducible, is_prime_power, make_field,
                         monic_polys, poly_divmod, prime_power)

SMALL_ORDERS = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 49]


def brute_irreducible(poly, p):
    """No root-free shortcut: try every monic factor of degree 1..deg/2."""
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for f in monic_polys(p, d):
            if not any(poly_divmod(poly, f, p)[1]):
                return False
    return True


def test_prime_field_has_no_modulus():
    F = make_field(3, 1)
    assert F.q == 3 and F.modulus is None


def test_composite_characteristic_rejected():
    with pytest.raises(NotPrime):
        make_field(4, 1)


def test_gf9_modulus_is_smallest_irreducible():
    F = make_field(3, 2)
    # coefficient tuples are constant term first, so tuple order is the lexicographic order
    irreducible = [tuple(c) for c in monic_polys(3, 2) if brute_irreducible(list(c), 3)]
    assert len(irreducible) == 3
    assert F.modulus == min(irreducible) == (1, 0, 1)


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)])
def test_chosen_modulus_irreducible(p, m):
    F = make_field(p, m)
    assert brute_irreducible(list(F.modulus), p)
    assert is_irreducible(list(F.modulus), p)


def test_prime_field_arithmetic():
    F = make_field(3)
    assert F.add(1, 2) == 0
    assert F.mul(2, 2) == 1
    assert F.inv(2) == 2
    with pytest.raises(ZeroInverse):
        F.inv(0)


def test_gf9_x_squared_reduces():
    F = make_field(3, 2)
    x = F.from_coeffs((0, 1))
    # x^2 = -1 mod x^2 + 1
    assert F.coeffs(F.mul(x, x)) == (2, 0)


@pytest.mark.parametrize("q", SMALL_ORDERS)
def test_field_axioms_exhaustive(q):
    F = field_for_order(q)
    els = range(q)
    A, M = F.add_table, F.mul_table
    for a in els:
        assert A[a, 0] == a and M[a, 1] == a
        assert A[a, F.neg(a)] == 0
        if a:
            assert M[a, F.inv(a)] == 1
    assert (A == A.T).all() and (M == M.T).all()
    for a, b, c in itertools.product(els, repeat=3):
        assert A[A[a, b], c] == A[a, A[b, c]]
        assert M[M[a, b], c] == M[a, M[b, c]]
        assert M[a, A[b, c]] == A[M[a, b], M[a, c]]


@pytest.mark.parametrize("q", [4, 8, 9, 16, 25, 27])
def test_frobenius_is_additive(q):
    F = field_for_order(q)
    for a, b in itertools.product(range(q), repeat=2):
        assert F.pow(F.add(a, b), F.p) == F.add(F.pow(a, F.p), F.pow(b, F.p))


def test_prime_power_detection():
    assert prime_power(27) == (3, 3)
    assert [q for q in range(2, 33) if is_prime_power(q)] == \
        [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32]
    with pytest.raises(NotPrimePower, match="6 is not a prime power"):
        field_for_order(6)


def test_large_order_supported():
    F = field_for_order(512)
    a = 300
    assert F.mul(a, F.inv(a)) == 1


@given(st.sampled_from(SMALL_ORDERS), st.data())
def test_inverse_property(q, data):
    F = field_for_order(q)
    a = data.draw(st.integers(1, q - 1))
    b = data.draw(st.integers(1, q - 1))
    assert F.mul(a, F.inv(a)) == 1
    assert F.div(F.mul(a, b), b) == a


def test_explicit_modulus_checked():
    with pytest.raises(ValueError):
        FieldSpec(3, 2, (0, 0, 1))
