"""The overorder poset container and product recombination."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..order import Lattice, Order, lattice_sum_many


@dataclass
class Branch:
    """Overorders of one prime branch, with cover edges between node indices."""

    label: object
    nodes: list  # Lattices
    edges: list | None = None  # (child, parent) index pairs, or None if not computed
    stats: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.nodes)


@dataclass
class OverorderPoset:
    """Overorders of ``base`` with Hasse edges ``(child, parent)``.

    When the poset is too large to materialise, ``nodes`` is empty,
    ``materialized`` is false and ``count`` is the product of the branch sizes.
    """

    base: Order
    nodes: list
    edges: list
    provenance: list
    count: int
    branches: list = field(default_factory=list)
    materialized: bool = True

    def __len__(self):
        return self.count

    def keys(self):
        return [o.key for o in self.nodes]

    def index_of(self, i: int) -> int:
        """``[node_i : base]``."""
        return _index(self.nodes[i].lattice, self.base.lattice)

    def maximal_nodes(self):
        parents = {c for c, _ in self.edges}
        return [i for i in range(len(self.nodes)) if i not in parents]


def _index(big: Lattice, small: Lattice) -> int:
    q = small.volume() / big.volume()
    return q.numerator


def sort_key(base: Order, L: Lattice):
    return (_index(L, base.lattice), L.key)


def finish(base: Order, lattices, edges_by_key, provenance_by_key, branches) -> OverorderPoset:
    """Deterministically order nodes and translate key edges to indices."""
    lattices = list(lattices)
    lattices.sort(key=lambda L: sort_key(base, L))
    pos = {L.key: i for i, L in enumerate(lattices)}
    edges = sorted({(pos[a], pos[b]) for a, b in edges_by_key})
    nodes = [Order(L) for L in lattices]
    prov = [provenance_by_key.get(L.key) for L in lattices]
    return OverorderPoset(base, nodes, edges, prov, len(nodes), branches, True)


def combine_branches(base: Order, branches, *, labels=None, need_edges=True, summer=None) -> OverorderPoset:
    """Cartesian product of branch posets, realised by lattice sums.

    ``summer`` maps a tuple of lattices (one per branch) to their sum; the
    default is :func:`lattice_sum_many`.
    """
    if summer is None:
        summer = lattice_sum_many
    if len(branches) == 0:
        return finish(base, [base.lattice], [], {base.lattice.key: {}}, [])
    lists = [b.nodes for b in branches]
    combos = list(itertools.product(*[range(len(x)) for x in lists]))
    key_of = {}
    lattices = []
    prov = {}
    for combo in combos:
        if len(branches) == 1:
            L = lists[0][combo[0]]
        else:
            L = summer([lists[i][j] for i, j in enumerate(combo)])
        key_of[combo] = L.key
        lattices.append(L)
        prov[L.key] = {b.label: j for b, j in zip(branches, combo)}
    edges = []
    if need_edges:
        for bi, b in enumerate(branches):
            if b.edges is None:
                raise ValueError("branch edges were not computed")
            for combo in combos:
                for c, par in b.edges:
                    if combo[bi] == c:
                        up = combo[:bi] + (par,) + combo[bi + 1 :]
                        edges.append((key_of[combo], key_of[up]))
    return finish(base, lattices, edges, prov, branches)
