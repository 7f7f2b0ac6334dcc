from __future__ import annotations

import pytest

from overorders.order import Lattice, OrderError, index_ideal
from overorders.primes import maximal_order, prime_ideals_over
from overorders.suborders import (
    conductor,
    conductor_survey,
    suborders_with_conductor,
    suborders_with_index,
    z_plus,
)

from support import X5, brute_force_overorders, cached_order, eq_order

GAUSS = [1, 0, 1]


def quintic():
    return cached_order(tuple(X5))


def ideal(order, p, elt):
    A = order.algebra
    vecs = [[p * c for c in b] for b in order.basis()]
    vecs += [list(A.mul(elt, b)) for b in order.basis()]
    return Lattice.from_vectors(A, vecs)


def test_index_one():
    G = eq_order(GAUSS)
    assert suborders_with_index(G, 1) == [G]


def test_gaussian_index_two():
    G = eq_order(GAUSS)
    (R,) = suborders_with_index(G, 2)
    # Z + 2Z i
    assert R.lattice == Lattice.from_vectors(G.algebra, [[1, 0], [0, 2]])


@pytest.mark.parametrize("coeffs,p", [(X5, 3), (X5, 5), ([-2, 0, 0, 1], 5), (GAUSS, 3)])
def test_prime_index_against_brute_force(coeffs, p):
    G = eq_order(coeffs)
    assert maximal_order(G) == G
    got = {R.key for R in suborders_with_index(G, p)}
    base = z_plus(G, G.lattice.scale(p))
    expected = {k for k in brute_force_overorders(base, G) if index_ideal(G.lattice, Lattice(G.algebra, k[0], k[1])) == p}
    assert got == expected


def test_conductor_whole_order():
    G = eq_order(GAUSS)
    assert suborders_with_conductor(G, G.lattice) == [G]


def test_conductor_rejects_non_ideal():
    G = eq_order(GAUSS)
    with pytest.raises(OrderError):
        suborders_with_conductor(G, Lattice.from_vectors(G.algebra, [[2, 0], [0, 1]]))


def test_quintic_non_conductors_at_17():
    G = quintic()
    for gen in ([8, 1, 0, 0, 0], [6, 1, 0, 0, 0]):
        assert suborders_with_conductor(G, ideal(G, 17, gen)) == []


def test_degree_one_primes_are_never_conductors():
    # Z + P = G when G/P = F_p, so the only candidate is G itself
    G = quintic()
    for P in prime_ideals_over(G, 17):
        if P.f == 1:
            assert z_plus(G, P.lattice) == G
            assert suborders_with_conductor(G, P.lattice) == []


def test_conductor_of_result():
    G = quintic()
    (P,) = [P for P in prime_ideals_over(G, 17) if P.f == 3]
    subs = suborders_with_conductor(G, P.lattice)
    assert subs
    for R in subs:
        assert conductor(R, G) == P.lattice


def test_survey_bound_18():
    rep = conductor_survey(quintic(), 18)
    below = [e for e in rep.entries if e.p < 17]
    assert below and all(e.is_conductor for e in below)
    # no prime below 17 has residue degree one (x^5 - x + 1 has no roots there)
    assert all(e.f > 1 for e in below)
    at17 = {e.generator: e for e in rep.entries if e.p == 17}
    assert not at17["a + 8"].is_conductor
    assert not at17["a + 6"].is_conductor
    assert at17["a^3 + 3*a^2 - 5*a - 6"].is_conductor
    assert len(rep.non_conductors()) == 2
    assert rep.degree_one_all_conductors() is False
    assert len(rep.lines()) == len(rep.entries)


def test_survey_empty():
    rep = conductor_survey(quintic(), 2)
    assert rep.entries == [] and rep.lines() == []
    assert rep.degree_one_all_conductors() is True


def test_survey_warns_on_non_maximal():
    with pytest.warns(RuntimeWarning):
        conductor_survey(eq_order([-5, 0, 1]), 3)
