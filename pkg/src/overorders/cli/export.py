"""JSON and DOT export of overorder posets.

Integers are written as decimal strings so that large indices and
discriminants survive consumers limited to 64-bit numbers.
"""

from __future__ import annotations

import json

from ..algebra import Algebra, algebra_from_json
from ..order import Lattice, Order, index_ideal, order_from_lattice
from ..primes import is_bass_at, is_gorenstein_at, prime_ideals_over, relevant_primes


class ExportError(ValueError):
    pass


def _local_flags(order: Order, primes):
    gor, bass = {}, {}
    for p in primes:
        Ps = prime_ideals_over(order, p)
        gor[str(p)] = all(is_gorenstein_at(order, P) for P in Ps)
        bass[str(p)] = all(is_bass_at(order, P) for P in Ps)
    return gor, bass


def poset_to_dict(poset, *, flags: bool = True) -> dict:
    if not poset.materialized:
        raise ExportError("cannot export a poset in counted form")
    base = poset.base
    primes = relevant_primes(base) if flags else []
    nodes = []
    for o in poset.nodes:
        d = o.lattice.to_json()
        d["index"] = str(index_ideal(o.lattice, base.lattice))
        d["disc"] = str(o.discriminant())
        if flags and base.algebra.commutative:
            d["gorenstein_at"], d["bass_at"] = _local_flags(o, primes)
        nodes.append(d)
    b = base.lattice.to_json()
    b["disc"] = str(base.discriminant())
    b["algebra"] = json.loads(base.algebra.to_json())
    return {"base": b, "nodes": nodes, "edges": [[c, p] for c, p in poset.edges]}


def to_json(poset, *, flags: bool = True, indent=None) -> str:
    return json.dumps(poset_to_dict(poset, flags=flags), indent=indent)


def from_json(text: str, algebra: Algebra | None = None):
    """``(base, nodes, edges)`` from exported JSON; nodes are re-verified orders."""
    data = json.loads(text)
    if algebra is None:
        algebra = algebra_from_json(json.dumps(data["base"]["algebra"]))
    base = order_from_lattice(Lattice.from_json(algebra, data["base"]))
    nodes = [order_from_lattice(Lattice.from_json(algebra, d)) for d in data["nodes"]]
    edges = [(int(c), int(p)) for c, p in data["edges"]]
    return base, nodes, edges


def to_dot(poset, name: str = "overorders") -> str:
    """Hasse diagram; nodes labelled by index, one rank per index value."""
    if not poset.materialized:
        raise ExportError("cannot export a poset in counted form")
    idx = [poset.index_of(i) for i in range(len(poset.nodes))]
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box];"]
    for i, v in enumerate(idx):
        lines.append(f'  n{i} [label="{v}"];')
    for v in sorted(set(idx)):
        members = " ".join(f"n{i};" for i, w in enumerate(idx) if w == v)
        lines.append(f"  {{ rank=same; {members} }}")
    for c, p in poset.edges:
        lines.append(f"  n{c} -> n{p};")
    lines.append("}")
    return "\n".join(lines) + "\n"
