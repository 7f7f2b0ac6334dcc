"""Structural invariants of computed posets."""

from __future__ import annotations

from sympy import factorint

from ..order import colon, index_ideal, order_from_lattice
from ..primes import prime_ideals_over
from .poset import OverorderPoset


class InvariantError(AssertionError):
    """A computed object violates a structural identity."""


def check_minimal_pair(small, big) -> int:
    """Checks for a cover ``small < big``; returns the prime p below it."""
    idx = index_ideal(big.lattice, small.lattice)
    fac = factorint(idx)
    if len(fac) != 1:
        raise InvariantError(f"minimal extension of index {idx} is not a prime power")
    (p,) = fac
    if small.discriminant() % (p * p):
        raise InvariantError("p^2 does not divide the discriminant of the smaller order")
    if not small.lattice.contains_lattice(big.lattice.scale(p)):
        raise InvariantError("p times the larger order is not contained in the smaller order")
    if small.algebra.commutative:
        cond = colon(small.lattice, big.lattice, "left")
        if not any(P.lattice == cond for P in prime_ideals_over(small, p)):
            raise InvariantError("conductor of a minimal extension is not a maximal ideal")
    return p


def check_poset(poset: OverorderPoset, *, minimal_pairs: bool = True) -> None:
    """Verify dedup, closure, the discriminant identity and cover properties."""
    if not poset.materialized:
        return
    keys = poset.keys()
    if len(set(keys)) != len(keys):
        raise InvariantError("duplicate orders in poset")
    base = poset.base
    for o in poset.nodes:
        order_from_lattice(o.lattice)
        if not o.lattice.contains_lattice(base.lattice):
            raise InvariantError("node does not contain the base order")
    for c, par in poset.edges:
        small, big = poset.nodes[c], poset.nodes[par]
        idx = index_ideal(big.lattice, small.lattice)
        if small.discriminant() != idx * idx * big.discriminant():
            raise InvariantError("disc(small) != [big:small]^2 disc(big)")
        if minimal_pairs:
            check_minimal_pair(small, big)
    if base.algebra.commutative and len(poset.maximal_nodes()) != 1:
        raise InvariantError("commutative poset without a unique maximal element")
