"""Shared instances and independent oracles for the test suite."""

from __future__ import annotations

import functools
import json
import pathlib
from fractions import Fraction

import sympy
from sympy.polys.numberfields.basis import round_two
from sympy.polys.numberfields.exceptions import ClosureFailure

from overorders.algebra import algebra_from_json, from_polynomial
from overorders.engine.submodules import all_stable_subgroups
from overorders.order import Lattice, Order, equation_order, lattice_product, quotient_module

ROOT = pathlib.Path(__file__).resolve().parent.parent
Q8_JSON = ROOT / "data" / "q8.json"

CUBIC = [-1000, -1000, -1000, 1]
QUINTIC = [143628091723623, 200947680677, 2331020454, 26241066, 46627, 1]
QUARTIC_F = [25214976, -1175040, -25920, -1680, 1]
QUARTIC_G = [25214975, -1175040, -25920, -1680, 1]
X5 = [1, -1, 0, 0, 0, 1]

X = sympy.Symbol("x")


def fk(k: int) -> list[int]:
    m = 5**k
    return [-m, -m, -m, -m, 1]


def eq_order(*factors) -> Order:
    return equation_order(from_polynomial([list(f) for f in factors]))


@functools.lru_cache(maxsize=None)
def cached_order(*factors) -> Order:
    """Equation order shared between tests, so per-order caches are reused."""
    return eq_order(*factors)


def fk_order(k: int) -> Order:
    return cached_order(tuple(fk(k)))


@functools.lru_cache(maxsize=None)
def q8_order() -> Order:
    return equation_order(algebra_from_json(Q8_JSON.read_text()))


def q8_idempotents():
    from overorders.algebra import AlgebraElement

    A = q8_order().algebra
    data = json.loads(Q8_JSON.read_text())
    return [AlgebraElement(A, tuple(Fraction(c) for c in e)) for e in data["idempotents"]]


def sympy_poly(coeffs):
    return sympy.Poly(list(reversed(coeffs)), X, domain=sympy.ZZ)


def oracle_index(coeffs) -> int | None:
    """[O_K : Z[x]/(f)] from sympy's round-two maximal order (f irreducible).

    Returns ``None`` when sympy's implementation raises ``ClosureFailure``
    (it does for x^4 - 125(x^3+x^2+x+1) in every representation tried).
    """
    P = sympy_poly(coeffs)
    try:
        _, dK = round_two(P)
    except ClosureFailure:
        return None
    q = sympy.Rational(sympy.discriminant(P), dK)
    root = sympy.sqrt(q)
    assert root.is_Integer
    return int(root)


def oracle_disc(coeffs) -> int:
    return int(sympy.discriminant(sympy_poly(coeffs)))


def quadratic_conductor(d: int) -> int:
    """Conductor f of Z[sqrt d] inside the maximal order, with 4d = f^2 d_K."""
    core = 1 if d > 0 else -1
    f2 = 1
    for q, e in sympy.factorint(abs(d)).items():
        core *= q ** (e % 2)
        f2 *= q ** (e - e % 2)
    f = sympy.sqrt(f2)
    return int(f) * (2 if core % 4 == 1 else 1)


def oracle_snf(M) -> list[int]:
    from sympy.matrices.normalforms import smith_normal_form

    S = smith_normal_form(sympy.Matrix(M), domain=sympy.ZZ)
    return sorted(abs(int(S[i, i])) for i in range(min(S.shape)))


def brute_force_overorders(order: Order, big: Order) -> set:
    """Keys of all rings between ``order`` and ``big``, by filtering every
    stable subgroup of ``big/order`` for multiplicative closure."""
    Q = quotient_module(big.lattice, order)
    actions = [[list(r) for r in M] for M in Q.left + Q.right]
    A = order.algebra
    n = A.dim
    den = big.lattice.den
    keys = set()
    for H in all_stable_subgroups(list(Q.divisors), actions):
        vecs = [[Fraction(sum(c * g[j] for c, g in zip(r, Q.gens)), den) for j in range(n)] for r in H]
        L = Lattice.from_vectors(A, vecs + order.basis())
        if L.contains_lattice(lattice_product(L, L)):
            keys.add(L.key)
    return keys
