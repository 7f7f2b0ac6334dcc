"""Command-line interface.

Exit status: 0 on success, 1 for invalid input, 2 when an internal
invariant fails during the computation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from sympy import isprime

from ..algebra import AlgebraElement, algebra_from_json, from_polynomial
from ..engine import DEFAULT_MAX_MATERIALIZE, overorders
from ..engine.checks import check_poset
from ..engine.generic import minimal_overrings
from ..engine.local import local_context, minimal_overorders_at_P
from ..engine.overorders import p_branch
from ..engine.poset import Branch, combine_branches
from ..order import Lattice, equation_order, index_ideal
from ..primes import is_bass_at, is_gorenstein_at, maximal_order, prime_ideals_over, relevant_primes
from ..suborders import conductor_survey, suborders_with_conductor, suborders_with_index
from . import export
from .polyparse import parse_poly

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _add_input(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--poly", help='defining polynomial, e.g. "x^3-1000*x^2-1000*x-1000"')
    g.add_argument("--factors", help="comma-separated factors of an etale algebra")
    g.add_argument("--table", metavar="FILE.json", help="structure constants {dim, one, table[, idempotents]}")
    p.add_argument("--threads", type=int, default=1, help="worker threads for independent prime branches")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="overorders", description="Overorders of orders in etale and semisimple Q-algebras.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("overorders", help="enumerate overorders")
    _add_input(p)
    p.add_argument("--prime", type=int, help="only overorders of p-power index")
    p.add_argument("--prime-ideal", type=int, metavar="INDEX", help="only P-overorders for the INDEX-th prime over --prime")
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--max-materialize", type=int, default=DEFAULT_MAX_MATERIALIZE, metavar="N")
    p.add_argument("--json", action="store_true", help="print the poset as JSON")
    p.add_argument("--dot", metavar="FILE", help="write the Hasse diagram in DOT format")
    p.add_argument("--no-decompose", action="store_true", help="ignore known direct-sum decompositions")
    p.add_argument("--no-prune", action="store_true", help="disable Frobenius pruning")
    p.add_argument("--check", action="store_true", help="verify structural invariants of the result")

    p = sub.add_parser("minimal", help="minimal overorders")
    _add_input(p)
    p.add_argument("--prime", type=int)
    p.add_argument("--prime-ideal", type=int, metavar="INDEX")

    p = sub.add_parser("maximal-order", help="the maximal order containing the input order")
    _add_input(p)

    p = sub.add_parser("suborders", help="suborders with given index or conductor")
    _add_input(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--index", type=int, metavar="M")
    g.add_argument("--conductor", metavar="SPEC", help="P:I for the I-th prime over P, or @FILE.json with {den, hnf}")

    p = sub.add_parser("conductor-survey", help="which small primes are conductors of suborders")
    _add_input(p)
    p.add_argument("--bound", type=int, required=True)

    p = sub.add_parser("info", help="discriminant and local properties")
    _add_input(p)
    return ap


# ---------------------------------------------------------------------------
# input handling


def load_order(args):
    """``(order, idempotents)`` from the input flags."""
    if args.poly is not None:
        f = parse_poly(args.poly)
        _check_poly(f)
        return equation_order(from_polynomial([f])), None
    if args.factors is not None:
        fs = [parse_poly(s) for s in args.factors.split(",")]
        for f in fs:
            _check_poly(f)
        return equation_order(from_polynomial(fs)), None
    with open(args.table, encoding="utf-8") as fh:
        text = fh.read()
    A = algebra_from_json(text)
    data = json.loads(text)
    idem = None
    if "idempotents" in data:
        idem = [AlgebraElement(A, tuple(Fraction(c) for c in e)) for e in data["idempotents"]]
    return equation_order(A), idem


def _check_poly(f):
    if len(f) < 2:
        raise InputError("polynomial must have positive degree")
    if f[-1] != 1:
        raise InputError("polynomial must be monic")


def _check_prime(p):
    if p is not None and not isprime(p):
        raise InputError(f"{p} is not prime")


def _prime_ideal(order, p, i):
    Ps = prime_ideals_over(order, p)
    if not 0 <= i < len(Ps):
        raise InputError(f"prime ideal index {i} out of range (there are {len(Ps)} primes over {p})")
    return Ps[i]


def _parse_conductor(order, spec):
    if spec.startswith("@"):
        with open(spec[1:], encoding="utf-8") as fh:
            return Lattice.from_json(order.algebra, fh.read())
    try:
        p, i = (int(x) for x in spec.split(":"))
    except ValueError:
        raise InputError("conductor must be P:I or @FILE.json") from None
    _check_prime(p)
    return _prime_ideal(order, p, i).lattice


# ---------------------------------------------------------------------------
# output helpers


def _node_line(order, base):
    if base.lattice.contains_lattice(order.lattice):
        idx = index_ideal(base.lattice, order.lattice)  # a suborder of base
    else:
        idx = index_ideal(order.lattice, base.lattice)
    hnf = [list(r) for r in order.hnf]
    return f"index {idx}  den {order.den}  hnf {hnf}"


def _print_orders(orders, base, out):
    print(len(orders), file=out)
    for o in orders:
        print(_node_line(o, base), file=out)


# ---------------------------------------------------------------------------
# commands


def cmd_overorders(args, order, idem, out):
    _check_prime(args.prime)
    if args.prime_ideal is not None and args.prime is None:
        raise InputError("--prime-ideal needs --prime")
    prune = not args.no_prune
    need_edges = not args.count_only

    def compute():
        if args.prime is None:
            return overorders(
                order,
                idempotents=idem,
                decompose=not args.no_decompose,
                threads=args.threads,
                max_materialize=args.max_materialize,
                count_only=args.count_only,
                edges=need_edges,
                prune=prune,
            )
        if args.prime_ideal is None:
            b = p_branch(order, args.prime, prune=prune, edges=need_edges)
        else:
            P = _prime_ideal(order, args.prime, args.prime_ideal)
            if not order.algebra.commutative:
                raise InputError("--prime-ideal needs a commutative algebra")
            ctx = local_context(order, args.prime, prune)
            lb = ctx.P_branch(ctx.match_prime(P), edges=need_edges)
            b = Branch(args.prime, [ctx.to_lattice(h) for h in lb.nodes], lb.edges, lb.stats)
        return combine_branches(order, [b], need_edges=need_edges)

    # validate the prime ideal index before starting the long computation
    if args.prime_ideal is not None:
        _prime_ideal(order, args.prime, args.prime_ideal)
    return compute, lambda poset: _report_poset(args, poset, out)


def _report_poset(args, poset, out):
    if args.check:
        check_poset(poset)
    if args.count_only or not poset.materialized:
        print(poset.count, file=out)
        if not poset.materialized and not args.count_only:
            sizes = " x ".join(str(b.stats.get("count", len(b.nodes))) for b in poset.branches)
            print(f"counted form (above --max-materialize); branch sizes {sizes}", file=out)
        return
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(export.to_dot(poset))
    if args.json:
        print(export.to_json(poset), file=out)
    else:
        _print_orders(poset.nodes, poset.base, out)


def cmd_minimal(args, order, idem, out):
    _check_prime(args.prime)
    if args.prime_ideal is not None:
        if args.prime is None:
            raise InputError("--prime-ideal needs --prime")
        P = _prime_ideal(order, args.prime, args.prime_ideal)
        if not order.algebra.commutative:
            raise InputError("--prime-ideal needs a commutative algebra")
        return lambda: minimal_overorders_at_P(order, P), lambda res: _print_orders(res, order, out)
    primes = [args.prime] if args.prime is not None else None

    def compute():
        ps = primes or relevant_primes(order)
        res = {}
        for p in ps:
            for G in minimal_overrings(order, order.lattice.scale(Fraction(1, p)), [p]):
                res[G.key] = G
        return sorted(res.values(), key=lambda G: (index_ideal(G.lattice, order.lattice), G.key))

    return compute, lambda res: _print_orders(res, order, out)


def cmd_maximal(args, order, idem, out):
    def report(O):
        print(f"disc {O.discriminant()}", file=out)
        print(f"index {index_ideal(O.lattice, order.lattice)}", file=out)
        print(f"den {O.den}", file=out)
        print(f"hnf {[list(r) for r in O.hnf]}", file=out)

    return lambda: maximal_order(order), report


def cmd_suborders(args, order, idem, out):
    if args.index is not None:
        if args.index < 1:
            raise InputError("index must be positive")
        return lambda: suborders_with_index(order, args.index), lambda res: _print_orders(res, order, out)
    F = _parse_conductor(order, args.conductor)
    return lambda: suborders_with_conductor(order, F), lambda res: _print_orders(res, order, out)


def cmd_survey(args, order, idem, out):
    if args.bound < 0:
        raise InputError("bound must be nonnegative")

    def report(rep):
        for line in rep.lines():
            print(line, file=out)
        flag = "yes" if rep.degree_one_all_conductors() else "no"
        print(f"every degree-one prime is a conductor: {flag}", file=out)

    return lambda: conductor_survey(order, args.bound), report


def cmd_info(args, order, idem, out):
    def compute():
        rows = []
        for p in relevant_primes(order):
            for i, P in enumerate(prime_ideals_over(order, p)):
                rows.append((p, i, P.f, is_gorenstein_at(order, P), is_bass_at(order, P)))
        return rows

    def report(rows):
        A = order.algebra
        print(f"dimension {A.dim}", file=out)
        print(f"commutative {'yes' if A.commutative else 'no'}", file=out)
        print(f"disc {order.discriminant()}", file=out)
        print(f"primes with p^2 | disc: {' '.join(str(p) for p in relevant_primes(order)) or 'none'}", file=out)
        for p, i, f, g, b in rows:
            print(f"p={p} prime {i}: f={f} gorenstein={'yes' if g else 'no'} bass={'yes' if b else 'no'}", file=out)

    return compute, report


COMMANDS = {
    "overorders": cmd_overorders,
    "minimal": cmd_minimal,
    "maximal-order": cmd_maximal,
    "suborders": cmd_suborders,
    "conductor-survey": cmd_survey,
    "info": cmd_info,
}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        order, idem = load_order(args)
        compute, report = COMMANDS[args.command](args, order, idem, out)
    except (InputError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        result = compute()
        report(result)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # any failure past input validation is a breach
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))
