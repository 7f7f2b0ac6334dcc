"""Suborders of a fixed order with prescribed index or conductor.

A suborder of index m contains ``Z + m*Gamma``, and a suborder with conductor
F contains ``Z + F``; both are orders, so the suborders are intermediate rings
between those and Gamma.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from .exactla import polyfp
from .order import Lattice, Order, OrderError, colon, index_ideal, lattice_product, order_from_lattice
from .primes import PrimeIdeal, maximal_order, prime_ideals_over
from .engine.generic import intermediate_rings


def z_plus(order: Order, ideal: Lattice) -> Order:
    """The order ``Z + ideal`` for a full-rank multiplicatively closed ``ideal``."""
    A = order.algebra
    vecs = [list(A.identity().coords)] + ideal.basis()
    L = Lattice.from_vectors(A, vecs, modulus_hint=ideal)
    return order_from_lattice(L)


def conductor(sub: Order, order: Order) -> Lattice:
    """``{x in order : x*order lies in sub}``."""
    return colon(sub.lattice, order.lattice, "left")


def _check_ideal(order: Order, F: Lattice) -> None:
    if not order.lattice.contains_lattice(F):
        raise OrderError("the conductor must lie in the order")
    P = lattice_product(order.lattice, F)
    Q = lattice_product(F, order.lattice)
    if not (F.contains_lattice(P) and F.contains_lattice(Q)):
        raise OrderError("lattice is not a two-sided ideal of the order")


def suborders_with_index(order: Order, m: int) -> list[Order]:
    """All suborders of ``order`` of index exactly ``m``."""
    if m < 1:
        raise ValueError("index must be positive")
    if m == 1:
        return [order]
    base = z_plus(order, order.lattice.scale(m))
    poset = intermediate_rings(base, order.lattice)
    return [R for R in poset.nodes if index_ideal(order.lattice, R.lattice) == m]


def suborders_with_conductor(order: Order, F: Lattice) -> list[Order]:
    """All suborders ``L`` of ``order`` with ``{x : x*order in L} = F``."""
    _check_ideal(order, F)
    if F == order.lattice:
        return [order]
    base = z_plus(order, F)
    poset = intermediate_rings(base, order.lattice)
    return [R for R in poset.nodes if conductor(R, order) == F]


# ---------------------------------------------------------------------------
# conductor survey


@dataclass
class SurveyEntry:
    p: int
    f: int
    prime: PrimeIdeal
    generator: str
    is_conductor: bool
    witnesses: int  # suborders with this conductor


@dataclass
class SurveyReport:
    bound: int
    entries: list = field(default_factory=list)

    def non_conductors(self):
        return [e for e in self.entries if not e.is_conductor]

    def degree_one_all_conductors(self) -> bool:
        """True when every degree-one prime in the survey occurs as a conductor."""
        return all(e.is_conductor for e in self.entries if e.f == 1)

    def lines(self):
        out = []
        for e in self.entries:
            tag = "conductor" if e.is_conductor else "not a conductor"
            out.append(f"p={e.p} f={e.f} <{e.p}, {e.generator}>: {tag} ({e.witnesses} suborders)")
        return out


def _fmt_poly(coeffs, var="a"):
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and abs(c) == 1:
            s = mono
        elif mono:
            s = f"{abs(c)}*{mono}"
        else:
            s = str(abs(c))
        sign = "-" if c < 0 else "+"
        terms.append((sign, s))
    if not terms:
        return "0"
    first = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    return first + "".join(f" {sg} {s}" for sg, s in terms[1:])


def _two_element(order: Order, P: PrimeIdeal):
    """A readable second generator of P (a polynomial in the generator ``a``) if one is found."""
    A = order.algebra
    p = P.p
    pres = A.etale_presentation
    if pres and len(pres) == 1 and order.lattice == Lattice.standard(A):
        f = pres[0]
        for g, _ in polyfp.factor([c % p for c in f], p):
            if polyfp.deg(g) == A.dim:
                return "0"  # P = p*order
            lift = [c if c <= p // 2 else c - p for c in g]
            coords = lift + [0] * (A.dim - len(lift))
            rows = [A.mul(coords, b) for b in order.basis()]
            L = Lattice.from_vectors(A, rows + [[p * x for x in b] for b in order.basis()], modulus_hint=order.lattice.scale(p))
            if L == P.lattice:
                return _fmt_poly(lift)
    return "hnf " + str([list(r) for r in P.lattice.hnf])


def conductor_survey(order: Order, bound: int) -> SurveyReport:
    """Which primes over p < bound are conductors of suborders of ``order``."""
    from sympy import primerange

    if maximal_order(order).lattice != order.lattice:
        warnings.warn("conductor survey on a non-maximal order", RuntimeWarning, stacklevel=2)
    report = SurveyReport(bound)
    for p in primerange(2, bound):
        for P in prime_ideals_over(order, p):
            base = z_plus(order, P.lattice)
            poset = intermediate_rings(base, order.lattice)
            hits = sum(1 for R in poset.nodes if conductor(R, order) == P.lattice)
            report.entries.append(SurveyEntry(p, P.f, P, _two_element(order, P), hits > 0, hits))
    return report
