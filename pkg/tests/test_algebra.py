from __future__ import annotations

from fractions import Fraction

import pytest
import sympy

from overorders.algebra import (
    AlgebraError,
    central_idempotents_from_factors,
    from_polynomial,
    from_structure_constants,
    is_decomposable,
    regular_representations,
    trace_form,
)
from overorders.order import equation_order
from overorders.primes import maximal_order

from support import QUARTIC_F, QUARTIC_G, q8_idempotents, q8_order


def test_from_polynomial_basic():
    A = from_polynomial([[-1, 0, 1]])
    assert A.dim == 2 and A.commutative
    x = A.basis_element(1)
    assert (x * x).coords == A.one


def test_quartic_pair_dimension():
    A = from_polynomial([QUARTIC_F, QUARTIC_G])
    assert A.dim == 8


@pytest.mark.parametrize(
    "factors",
    [
        [[0, 0, 1]],  # x^2 is not squarefree
        [[1, 2]],  # 2x + 1 is not monic
        [[-1, 1], [-1, 1]],  # repeated factor
        [[0, 1], [0, 0, 1]],  # x and x^2 share a factor
    ],
)
def test_from_polynomial_rejects(factors):
    with pytest.raises(AlgebraError):
        from_polynomial(factors)


def test_structure_constants_trivial():
    A = from_structure_constants([[[1]]], [1])
    assert A.dim == 1
    assert trace_form(A) == [[1]]


def test_structure_constants_bad_shape():
    with pytest.raises(AlgebraError):
        from_structure_constants([[[1, 0]]], [1])
    with pytest.raises(AlgebraError):
        from_structure_constants([[[1], [0]]], [1])


def test_structure_constants_bad_identity():
    with pytest.raises(AlgebraError):
        from_structure_constants([[[2]]], [1])


def test_structure_constants_non_associative():
    # b0 = 1, b1*b1 = b1, b1*b2 = b2, b2*b1 = 0, b2*b2 = b1: (b2 b1) b2 = 0 but b2 (b1 b2) = b1
    one = [1, 0, 0]
    e = lambda i: [int(i == k) for k in range(3)]  # noqa: E731
    table = [
        [e(0), e(1), e(2)],
        [e(1), e(1), e(2)],
        [e(2), [0, 0, 0], e(1)],
    ]
    with pytest.raises(AlgebraError, match="associative"):
        from_structure_constants(table, one)


def test_regular_representations():
    A = from_polynomial([[-1, 0, 1]])
    L, R = regular_representations(A.basis_element(1))
    assert L == [[0, 1], [1, 0]] and R == L
    L1, R1 = regular_representations(A.identity())
    assert L1 == R1 == [[1, 0], [0, 1]]


def test_q8_noncommutative():
    A = q8_order().algebra
    assert A.dim == 8 and not A.commutative
    L, R = regular_representations(A.basis_element(1))
    assert L != R
    # semisimple: the regular trace form is nondegenerate
    assert sympy.Matrix(trace_form(A)).det() != 0


def test_trace_form_x2_minus_1():
    A = from_polynomial([[-1, 0, 1]])
    assert trace_form(A) == [[2, 0], [0, 2]]


def test_central_idempotents_linear():
    A = from_polynomial([[-1, 1], [1, 1]])
    e1, e2 = central_idempotents_from_factors(A)
    half = Fraction(1, 2)
    assert e1.coords == (half, half)
    assert e2.coords == (half, -half)


def test_central_idempotents_quartic_pair():
    A = from_polynomial([QUARTIC_F, QUARTIC_G])
    es = central_idempotents_from_factors(A)
    for e in es:
        assert (e * e).coords == e.coords
    # e = 1 - f(x) is 1 modulo f and 0 modulo f - 1; the complement is f(x)
    f = [Fraction(c) for c in QUARTIC_F] + [Fraction(0)] * 3
    one_minus_f = [1 - f[0]] + [-c for c in f[1:]]
    assert list(es[0].coords) == one_minus_f
    assert list(es[1].coords) == f


def test_central_idempotents_single_factor():
    with pytest.raises(AlgebraError):
        central_idempotents_from_factors(from_polynomial([[-1, 0, 1]]))


def test_quartic_pair_decomposable():
    A = from_polynomial([QUARTIC_F, QUARTIC_G])
    L = equation_order(A)
    res = is_decomposable(L, central_idempotents_from_factors(A))
    assert res is not None
    e, p1, p2 = res
    assert all(c.denominator == 1 for c in e.coords)
    assert p1.order.dim == p2.order.dim == 4


def test_q8_indecomposable():
    es = q8_idempotents()
    assert len(es) == 5
    assert is_decomposable(q8_order(), es) is None


def test_maximal_order_of_q_times_q_decomposes():
    A = from_polynomial([[-1, 1], [1, 1]])
    O = maximal_order(equation_order(A))
    assert is_decomposable(O, central_idempotents_from_factors(A)) is not None
    assert is_decomposable(equation_order(A), central_idempotents_from_factors(A)) is None
