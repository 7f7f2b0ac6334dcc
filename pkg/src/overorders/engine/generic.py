"""Generic intermediate-ring machinery (any semisimple algebra).

Minimal overrings of an order inside a bimodule lattice are found from the
minimal sub-bimodules of the p-torsion of the quotient, lifted and closed
under multiplication.  A worklist over minimal overrings then yields all
intermediate rings.
"""

from __future__ import annotations

from fractions import Fraction
from math import prod

from sympy import factorint

from ..exactla import fpla
from ..order import (
    Lattice,
    Order,
    colon,
    index_ideal,
    lattice_intersect,
    lattice_product,
    lattice_sum,
)
from .poset import Branch, OverorderPoset, combine_branches, finish
from .submodules import SubmoduleSearchSpace, minimal_stable_submodules


class SpinError(RuntimeError):
    """Closure under multiplication did not stabilise (invariant breach)."""


def ring_spin(L: Lattice, within: Lattice | None = None, max_steps: int | None = None):
    """Smallest ring containing ``L`` (``L`` must contain 1).

    With ``within`` the closure is abandoned (``None`` is returned) as soon as
    it leaves that lattice; this also stops lattices that generate no order.
    """
    if max_steps is None:
        max_steps = 64 + L.dim
    cur = L
    for _ in range(max_steps):
        if within is not None and not within.contains_lattice(cur):
            return None
        nxt = lattice_sum(cur, lattice_product(cur, cur))
        if nxt == cur:
            return Order(cur)
        cur = nxt
    raise SpinError("multiplicative closure did not stabilise")


def spin(M, order: Order) -> Order:
    """Subring generated by ``order`` and the lattice (or generator list) ``M``."""
    if not isinstance(M, Lattice):
        M = Lattice.from_vectors(order.algebra, list(M) + order.basis())
    return ring_spin(lattice_sum(M, order.lattice))


def action_matrices(order: Order, p: int):
    """Left and right multiplication by the basis on ``order/p*order`` (row convention)."""
    table, _ = order.structure_constants()
    n = order.dim
    left, right = [], []
    for i in range(n):
        L = [[0] * n for _ in range(n)]
        R = [[0] * n for _ in range(n)]
        for j in range(n):
            for k, c in table[i][j]:
                L[j][k] = (L[j][k] + c) % p  # w_i * w_j
            for k, c in table[j][i]:
                R[j][k] = (R[j][k] + c) % p  # w_j * w_i
        left.append(L)
        right.append(R)
    if order.algebra.commutative:
        return left, []
    return left, right


def _restrict_actions(mats, space, p):
    out = []
    for M in mats:
        rows = []
        for r in space[0]:
            c = fpla.coordinates(fpla.vec_mat(list(r), M, p), space, p)
            if c is None:
                raise ValueError("bimodule is not stable under the order")
            rows.append(c)
        out.append(rows)
    return out


def _p_torsion_space(order: Order, L0: Lattice, p: int):
    """``(L0 ∩ p^-1 order)/order`` as a subspace of ``order/p*order``."""
    pinv = order.lattice.scale(Fraction(1, p))
    X = lattice_intersect(L0, pinv)
    vecs = []
    for row in X.hnf:
        c = order.lattice.coords_of_int([p * x for x in row], X.den)
        vecs.append([x % p for x in c])
    return fpla.rref(vecs, order.dim, p)


def _lift(order: Order, vecs, p: int) -> Lattice:
    """``order + (1/p) span(vecs)`` for vectors in order coordinates."""
    H = order.hnf
    n = order.dim
    rows = [[sum(v[i] * H[i][k] for i in range(n) if v[i]) for k in range(n)] for v in vecs]
    rows += [[p * x for x in r] for r in H]
    modulus = p * prod(H[i][i] for i in range(n))
    return Lattice.from_int_rows(order.algebra, rows, order.den * p, modulus)


def minimal_overrings(order: Order, L0: Lattice, primes=None) -> list[Order]:
    """All minimal overrings of ``order`` contained in the bimodule ``L0``."""
    idx = index_ideal(L0, order.lattice)
    if idx == 1:
        return []
    plist = primes if primes is not None else sorted(factorint(idx))
    n = order.dim
    cands = {}
    for p in plist:
        if idx % p:
            continue
        if L0 == order.lattice.scale(Fraction(1, p)):
            space = (fpla.identity(n), list(range(n)))
        else:
            space = _p_torsion_space(order, L0, p)
        if not space[0]:
            continue
        left, right = action_matrices(order, p)
        acts = _restrict_actions(left + right, space, p)
        S = SubmoduleSearchSpace(len(space[0]), p, acts, commutative=order.algebra.commutative)
        for sub in minimal_stable_submodules(S):
            vecs = [fpla.vec_mat(list(r), space[0], p) for r in sub]
            G = ring_spin(_lift(order, vecs, p), within=L0)
            if G is not None:
                cands[G.key] = G
    # inclusion-minimal candidates
    ordered = sorted(cands.values(), key=lambda G: (G.lattice.volume(), G.key), reverse=True)
    out = []
    for G in ordered:
        if not any(G.lattice.contains_lattice(H.lattice) for H in out):
            out.append(G)
    out.sort(key=lambda G: G.key)
    return out


def _stable_part(G: Order, L0: Lattice) -> Lattice:
    """``{x : G x G ⊆ L0}``; equals ``L0`` when it is already a G-bimodule."""
    if lattice_product(G.lattice, L0) == L0 and lattice_product(L0, G.lattice) == L0:
        return L0
    A = G.algebra
    X = colon(L0, G.lattice, "right")
    if A.commutative:
        return X
    return colon(X, G.lattice, "left")


def _worklist(order: Order, target, primes=None) -> Branch:
    """Breadth-first traversal of minimal overrings.

    ``target(G)`` returns the bimodule in which minimal overrings of ``G`` are
    sought.  The branch holds every ring reached and all cover edges.
    """
    nodes = {order.key: order}
    edges = []
    queue = [order]
    while queue:
        G = queue.pop(0)
        for H in minimal_overrings(G, target(G), primes):
            edges.append((G.key, H.key))
            if H.key not in nodes:
                nodes[H.key] = H
                queue.append(H)
    keys = sorted(nodes)
    pos = {k: i for i, k in enumerate(keys)}
    return Branch(
        label=None,
        nodes=[nodes[k].lattice for k in keys],
        edges=[(pos[a], pos[b]) for a, b in edges],
    )


def intermediate_rings(order: Order, L0: Lattice) -> OverorderPoset:
    """All rings ``R`` with ``order ⊆ R ⊆ L0`` as a poset."""
    idx = index_ideal(L0, order.lattice)
    if idx == 1:
        return finish(order, [order.lattice], [], {order.key: {}}, [])
    fac = factorint(idx)
    branches = []
    for p in sorted(fac):
        cof = idx // p ** fac[p]
        Lp = lattice_sum(order.lattice, L0.scale(cof)) if len(fac) > 1 else L0
        b = _worklist(order, lambda G, Lp=Lp: _stable_part(G, Lp), [p])
        b.label = p
        branches.append(b)
    return combine_branches(order, branches)


def p_overorders_generic_branch(order: Order, p: int) -> Branch:
    b = _worklist(order, lambda G: G.lattice.scale(Fraction(1, p)), [p])
    b.label = p
    return b


def p_overorders_generic(order: Order, p: int) -> list[Order]:
    """All overorders of p-power index, via minimal overorders in ``p^-1 G``."""
    b = p_overorders_generic_branch(order, p)
    return [Order(L) for L in b.nodes]
