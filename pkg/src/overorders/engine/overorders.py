"""All overorders of an order: per-prime branches, recombined by sums."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from math import prod

from ..algebra import central_idempotents_from_factors, is_decomposable
from ..order import Lattice, Order
from ..primes import relevant_primes
from .generic import p_overorders_generic_branch
from .local import p_branch_etale
from .poset import Branch, OverorderPoset, combine_branches

DEFAULT_MAX_MATERIALIZE = 10**6


def branch_size(b: Branch) -> int:
    return b.stats.get("count", len(b.nodes)) if not b.nodes else len(b.nodes)


def p_branch(order: Order, p: int, *, prune=True, edges=True, max_materialize=None) -> Branch:
    """The p-branch, by the local engine when the algebra is commutative."""
    if order.algebra.commutative:
        return p_branch_etale(order, p, prune=prune, edges=edges, max_materialize=max_materialize)
    return p_overorders_generic_branch(order, p)


def _counted(order, count, branches) -> OverorderPoset:
    return OverorderPoset(order, [], [], [], count, branches, False)


def _find_split(order: Order, idempotents):
    if idempotents is None:
        pres = order.algebra.etale_presentation
        if not pres or len(pres) < 2:
            return None
        idempotents = central_idempotents_from_factors(order.algebra)
    if len(idempotents) < 2:
        return None
    return is_decomposable(order, idempotents)


def overorders(
    order: Order,
    *,
    idempotents=None,
    decompose: bool = True,
    threads: int = 1,
    max_materialize: int = DEFAULT_MAX_MATERIALIZE,
    count_only: bool = False,
    edges: bool = True,
    prune=True,
) -> OverorderPoset:
    """All overorders of ``order`` as a poset sorted by (index, key).

    If the order splits along the supplied central idempotents (or along the
    factors of an étale presentation) the two components are treated
    separately and their posets multiplied.  Posets larger than
    ``max_materialize`` are returned in counted form.
    """
    opts = dict(threads=threads, max_materialize=max_materialize, count_only=count_only, edges=edges, prune=prune)
    split = _find_split(order, idempotents) if decompose else None
    if split is not None:
        _, part1, part2 = split
        subs = [overorders(part.order, decompose=False, **opts) for part in (part1, part2)]
        count = subs[0].count * subs[1].count
        branches = []
        for label, part, sub in zip(("e", "1-e"), (part1, part2), subs):
            nodes = [part.to_parent(o.lattice) for o in sub.nodes]
            branches.append(Branch(label=label, nodes=nodes, edges=sub.edges, stats={"count": sub.count}))
        if count_only or count > max_materialize or not all(s.materialized for s in subs):
            return _counted(order, count, branches)
        A = order.algebra

        def summer(parts):
            return Lattice.from_vectors(A, [v for part in parts for v in part], modulus_hint=order.lattice)

        return combine_branches(order, branches, need_edges=edges, summer=summer)

    primes = relevant_primes(order)
    cap = max_materialize

    def run(p):
        b = p_branch(order, p, prune=prune, edges=edges and not count_only, max_materialize=cap)
        b.label = p
        return b

    if threads > 1 and len(primes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            branches = list(pool.map(run, primes))
    else:
        branches = [run(p) for p in primes]
    count = prod(branch_size(b) for b in branches)
    if count_only or count > max_materialize or any(not b.nodes for b in branches):
        return _counted(order, count, branches)
    return combine_branches(order, branches, need_edges=edges)


def overorder_count(order: Order, **kw) -> int:
    return overorders(order, count_only=True, **kw).count
