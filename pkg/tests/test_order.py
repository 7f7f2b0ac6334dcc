from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from overorders.algebra import from_polynomial
from overorders.engine.submodules import all_stable_subgroups
from overorders.order import (
    Lattice,
    OrderError,
    canonical_form,
    colon,
    discriminant,
    equation_order,
    index_ideal,
    lattice_intersect,
    lattice_product,
    lattice_sum,
    order_from_lattice,
    order_ideal_structure,
    orders_equal,
    quotient_module,
)
from overorders.primes import maximal_order, prime_ideals_over

from support import CUBIC, X5, eq_order, fk_order, oracle_disc, oracle_index, q8_order

SQRT5 = [-5, 0, 1]


def test_equation_order_is_order():
    A = from_polynomial([CUBIC])
    L = Lattice.standard(A)
    assert order_from_lattice(L) == equation_order(A)


def test_order_from_lattice_witness():
    A = from_polynomial([[-1, 0, 1]])
    L = Lattice.from_vectors(A, [[1, 0], [0, Fraction(1, 2)]])
    with pytest.raises(OrderError) as exc:
        order_from_lattice(L)
    assert exc.value.witness is not None


def test_group_ring_is_order():
    G = q8_order()
    assert order_from_lattice(G.lattice) == G


def test_lattice_sum_and_intersection():
    L = eq_order(SQRT5)
    A = L.algebra
    assert lattice_sum(L.lattice, L.lattice) == L.lattice
    golden = Lattice.from_vectors(A, [[1, 0], [Fraction(1, 2), Fraction(1, 2)]])
    S = lattice_sum(L.lattice, golden)
    assert S == golden
    assert index_ideal(S, L.lattice) == 2
    assert lattice_intersect(L.lattice, golden) == L.lattice
    assert lattice_product(L.lattice, L.lattice) == L.lattice


def test_colon_identities():
    L = eq_order(SQRT5)
    assert colon(L.lattice, L.lattice) == L.lattice
    (P,) = prime_ideals_over(L, 2)
    # Z[sqrt 5] is not maximal at 2, so (P : P) is strictly larger
    M = colon(P.lattice, P.lattice)
    assert index_ideal(M, L.lattice) == 2
    assert M == maximal_order(L).lattice


def test_cubic_conductor_and_quotient():
    L = eq_order(CUBIC)
    O = maximal_order(L)
    assert index_ideal(O.lattice, L.lattice) == 1000 == oracle_index(CUBIC)
    F = colon(L.lattice, O.lattice)
    assert O.lattice.contains_lattice(F) and L.lattice.contains_lattice(F)
    Q = quotient_module(O.lattice, L)
    assert order_ideal_structure(Q) == [10, 100]
    actions = [[list(r) for r in M] for M in Q.left]
    assert sum(1 for _ in all_stable_subgroups(Q.divisors, [])) == 112
    assert len(list(all_stable_subgroups(Q.divisors, actions))) < 112


def test_trivial_quotient():
    L = eq_order(CUBIC)
    Q = quotient_module(L.lattice, L)
    assert order_ideal_structure(Q) == [] and Q.order == 1
    assert index_ideal(L.lattice, L.lattice) == 1


def test_inverse_prime_quotient():
    L = eq_order(X5)
    Q = quotient_module(L.lattice.scale(Fraction(1, 17)), L)
    assert Q.divisors == [17] * 5


def test_q8_index():
    G = q8_order()
    assert index_ideal(maximal_order(G).lattice, G.lattice) == 512


def test_fk_quotient_order():
    L = fk_order(4)
    O = maximal_order(L)
    assert index_ideal(O.lattice, L.lattice) == 5**6


@pytest.mark.parametrize("coeffs", [X5, CUBIC, SQRT5, [-1, 0, 1], [1, -3, 0, 1], [-10, 0, 0, 0, 1]])
def test_discriminant_matches_sympy(coeffs):
    assert discriminant(eq_order(coeffs)) == oracle_disc(coeffs)


def test_discriminant_examples():
    assert abs(discriminant(eq_order(X5))) == 2869 == 19 * 151
    assert discriminant(eq_order([-1, 0, 1])) == 4
    assert discriminant(eq_order([0, 1])) == 1


def test_canonical_form():
    L = eq_order(CUBIC)
    A = L.algebra
    basis = L.basis()
    rng = random.Random(7)
    keys = set()
    for _ in range(10):
        # a random unimodular change of basis
        vecs = [list(b) for b in basis]
        for _ in range(12):
            i, j = rng.sample(range(len(vecs)), 2)
            c = rng.randint(-5, 5)
            vecs[i] = [x + c * y for x, y in zip(vecs[i], vecs[j])]
        rng.shuffle(vecs)
        keys.add(canonical_form(Lattice.from_vectors(A, vecs)))
    assert keys == {canonical_form(L.lattice)}
    assert canonical_form(L.lattice.scale(Fraction(1, 3))) != canonical_form(L.lattice)
    assert orders_equal(L, equation_order(A))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-30, 30), min_size=3, max_size=3), min_size=3, max_size=5), st.integers(1, 6))
def test_lattice_laws(rows, den):
    A = from_polynomial([CUBIC])
    vecs = [[Fraction(x, den) for x in r] for r in rows]
    try:
        L1 = Lattice.from_vectors(A, vecs)
    except ValueError:
        return  # rank deficient
    if L1.dim != 3:
        return
    L2 = Lattice.standard(A)
    S, I = lattice_sum(L1, L2), lattice_intersect(L1, L2)
    assert S.contains_lattice(L1) and S.contains_lattice(L2)
    assert L1.contains_lattice(I) and L2.contains_lattice(I)
    # [S:L1] = [L2:I]
    assert index_ideal(S, L1) == index_ideal(L2, I)


def test_json_round_trip():
    L = eq_order(CUBIC)
    O = maximal_order(L)
    data = json.loads(json.dumps(O.lattice.to_json()))
    assert Lattice.from_json(L.algebra, data) == O.lattice
