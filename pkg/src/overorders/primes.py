"""Prime ideals, radicals, primary parts and maximal orders.

Everything modulo p is done in the coordinates of the order's own Z-basis,
using the integral structure constants from ``Order.structure_constants``.
"""

from __future__ import annotations

import random
from fractions import Fraction
from dataclasses import dataclass, field
from math import prod

from sympy import factorint, isprime

from .exactla import fpla, kernels, polyfp
from .exactla.finfield import FiniteField
from .order import (
    Lattice,
    Order,
    QuotientModule,
    colon,
    index_ideal,
    lattice_intersect,
    lattice_product,
    lattice_sum,
    order_from_lattice,
)


class ModP:
    """The finite ring ``order / p*order`` in the order's basis."""

    def __init__(self, order: Order, p: int):
        self.order = order
        self.p = p
        self.n = order.dim
        self.table, one = order.structure_constants()
        self.one = [x % p for x in one]

    def mul(self, a, b):
        return kernels.mul_mod(a, b, self.table, self.p)

    def pow(self, a, e: int):
        result = list(self.one)
        base = list(a)
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def unit(self, i: int):
        v = [0] * self.n
        v[i] = 1
        return v

    def basis(self):
        return [self.unit(i) for i in range(self.n)]

    def lattice_of(self, vecs) -> Lattice:
        """Lattice spanned by lifts of ``vecs`` together with ``p*order``."""
        L = self.order.lattice
        H = L.hnf
        n = self.n
        rows = []
        for v in vecs:
            rows.append([sum(v[i] * H[i][k] for i in range(n) if v[i]) for k in range(n)])
        p = self.p
        rows.extend([p * x for x in r] for r in H)
        modulus = p * prod(H[i][i] for i in range(n))
        return Lattice.from_int_rows(L.algebra, rows, L.den, modulus)

    def subspace_of(self, lattice: Lattice):
        """F_p-subspace ``(lattice + p*order) / p*order`` in order coordinates."""
        L = self.order.lattice
        vecs = []
        for row in lattice.hnf:
            c = L.coords_of_int(row, lattice.den)
            if c is None:
                raise ValueError("lattice is not contained in the order")
            vecs.append([x % self.p for x in c])
        return fpla.rref(vecs, self.n, self.p)


# ---------------------------------------------------------------------------
# radical


def _frobenius_radical(R: ModP):
    p, n = R.p, R.n
    e = p
    while e < n:
        e *= p
    images = [R.pow(b, e) for b in R.basis()]
    return fpla.left_kernel(images, n, n, p)


def _trace_gram(order: Order):
    table, _ = order.structure_constants()
    n = order.dim
    # trace of left multiplication by w_k: sum_i coeff of w_i in w_k * w_i
    tr = []
    for k in range(n):
        t = 0
        for i in range(n):
            for idx, c in table[k][i]:
                if idx == i:
                    t += c
        tr.append(t)
    G = [[sum(c * tr[k] for k, c in table[i][j]) for j in range(n)] for i in range(n)]
    return G


def _trace_radical(R: ModP):
    G = R.order.cached("trace_gram", lambda: _trace_gram(R.order))
    p, n = R.p, R.n
    return fpla.left_kernel([[x % p for x in row] for row in G], n, n, p)


def _left_matrix_int(order: Order, x):
    """Row-convention integer matrix of ``v -> x*v`` in the order basis."""
    table, _ = order.structure_constants()
    n = order.dim
    M = []
    for j in range(n):
        row = [0] * n
        for i, xi in enumerate(x):
            if xi:
                for k, c in table[i][j]:
                    row[k] += xi * c
        M.append(row)
    return M


def _trace_power(M, e: int, modulus: int) -> int:
    n = len(M)
    result = None
    base = [[x % modulus for x in r] for r in M]
    while e:
        if e & 1:
            result = base if result is None else _mm(result, base, modulus)
        e >>= 1
        if e:
            base = _mm(base, base, modulus)
    return sum(result[i][i] for i in range(n)) % modulus


def _mm(A, B, m):
    Bt = list(zip(*B))
    return [[sum(x * y for x, y in zip(r, c)) % m for c in Bt] for r in A]


def _ciw_radical(R: ModP):
    """Radical of ``order/p`` in any characteristic via integral trace lifts."""
    p, n = R.p, R.n
    order = R.order
    basis = R.basis()
    current = _trace_radical(R)
    i = 1
    while p**i <= n and current:
        mod = p ** (i + 1)
        vals = []
        for v in current:
            row = []
            for w in basis:
                z = kernels.mul_mod(v, w, R.table, 0)
                t = _trace_power(_left_matrix_int(order, z), p**i, mod)
                if t % p**i:
                    raise ArithmeticError("trace lift not divisible; invariant breach")  # pragma: no cover
                row.append((t // p**i) % p)
            vals.append(row)
        ker = fpla.left_kernel(vals, len(current), n, p)
        current = [fpla.vec_mat(k, current, p) for k in ker]
        i += 1
    return current


def p_radical_space(order: Order, p: int):
    """RREF of the radical of ``order/p*order`` (cached)."""

    def compute():
        R = ModP(order, p)
        if not order.algebra.commutative:
            vecs = _ciw_radical(R)
        elif p > order.dim:
            vecs = _trace_radical(R)
        else:
            vecs = _frobenius_radical(R)
        return fpla.rref(vecs, order.dim, p)

    return order.cached(("radical", p), compute)


def p_radical(order: Order, p: int) -> Lattice:
    """Preimage in the order of the nilradical of ``order/p*order``."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    R = ModP(order, p)
    return R.lattice_of(p_radical_space(order, p)[0])


# ---------------------------------------------------------------------------
# prime ideals


@dataclass
class PrimeIdeal:
    """A maximal ideal of ``order`` containing ``p``.

    ``space`` is the F_p-subspace ``P/p*order`` in order coordinates (RREF).
    For commutative orders ``residue_field`` is ``order/P``; ``alpha`` is an
    element whose class generates it, and ``residue`` maps order coordinates
    to field elements.  For noncommutative orders the field describes the
    centre of the simple quotient.
    """

    order: Order
    p: int
    lattice: Lattice
    f: int
    space: tuple
    residue_field: FiniteField | None = None
    alpha: list | None = None
    idempotent: list | None = None
    _coord_inv: list | None = field(default=None, repr=False)

    @property
    def q(self) -> int:
        return self.p**self.f

    @property
    def key(self):
        return (self.f, self.lattice.key)

    def residue(self, x):
        """Image of order coordinates ``x`` in the residue field."""
        if self._coord_inv is None:
            raise ValueError("residue map only available for commutative orders")
        c = fpla.vec_mat([v % self.p for v in x], self._coord_inv, self.p)
        return self.residue_field.from_coeffs(c[: self.f])

    def __repr__(self):
        return f"PrimeIdeal(p={self.p}, f={self.f}, lattice={self.lattice!r})"


def _krylov_minpoly(R: ModP, x, start, red):
    """Minimal polynomial of ``x`` acting on ``start`` modulo the subspace ``red``."""
    p = R.p
    powers = [fpla.reduce(start, red, p)]
    while True:
        cur = powers[-1]
        coords = _solve_combo(powers[:-1], cur, R.n, p)
        if coords is not None:
            # x^k = sum c_i x^i  gives  t^k - sum c_i t^i
            poly = [(-c) % p for c in coords] + [1]
            return poly, powers[:-1]
        powers.append(fpla.reduce(R.mul(x, cur), red, p))


def _solve_combo(vecs, target, n, p):
    if not any(target):
        return [0] * len(vecs)
    if not vecs:
        return None
    M = [list(v) for v in vecs] + [[(-x) % p for x in target]]
    ker = fpla.left_kernel(M, len(M), n, p)
    for k in ker:
        if k[-1]:
            inv = pow(k[-1], -1, p)
            return [(c * inv) % p for c in k[:-1]]
    return None


def _split_idempotents(R: ModP, rad, berl, s):
    """Refine ``1`` into ``s`` orthogonal idempotents using elements of ``berl``."""
    p = R.p
    E = [fpla.reduce(R.one, rad, p)]
    for b in berl:
        if len(E) >= s:
            break
        newE = []
        for e in E:
            eb = fpla.reduce(R.mul(e, b), rad, p)
            poly, _ = _krylov_minpoly(R, eb, e, rad)
            rts = polyfp.roots(poly, p)
            if len(rts) <= 1:
                newE.append(e)
                continue
            for lam in rts:
                acc = e
                for mu in rts:
                    if mu == lam:
                        continue
                    inv = pow((lam - mu) % p, -1, p)
                    factor = [((x - mu * y) * inv) % p for x, y in zip(eb, e)]
                    acc = fpla.reduce(R.mul(acc, factor), rad, p)
                newE.append(acc)
        E = newE
    if len(E) != s:
        raise ArithmeticError("idempotent splitting did not separate all components")  # pragma: no cover
    return E


def _quotient_coords(vec, rad, nonpiv, p):
    r = fpla.reduce(vec, rad, p)
    return [r[c] for c in nonpiv]


def prime_ideals_over(order: Order, p: int) -> list[PrimeIdeal]:
    """All maximal ideals of ``order`` containing ``p``, sorted by (f, HNF key)."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    return order.cached(("primes", p), lambda: _compute_primes(order, p))


def _compute_primes(order: Order, p: int) -> list[PrimeIdeal]:
    R = ModP(order, p)
    n = R.n
    rad = p_radical_space(order, p)
    piv = set(rad[1])
    nonpiv = [c for c in range(n) if c not in piv]
    m = len(nonpiv)
    if m == 0:
        return []
    comm = order.algebra.commutative
    qbasis = [R.unit(c) for c in nonpiv]
    if comm:
        centre = qbasis
    else:
        # centre of order/rad: z with z*w - w*z in rad for every basis w
        cols = []
        for z in qbasis:
            row = []
            for w in R.basis():
                d = [(x - y) % p for x, y in zip(R.mul(z, w), R.mul(w, z))]
                row.extend(_quotient_coords(d, rad, nonpiv, p))
            cols.append(row)
        ker = fpla.left_kernel(cols, m, len(cols[0]), p)
        centre = [fpla.vec_mat(k, qbasis, p) for k in ker]
    # Berlekamp subalgebra: fixed points of Frobenius on the centre
    frob = []
    for z in centre:
        img = _quotient_coords(R.pow(z, p), rad, nonpiv, p)
        zc = _quotient_coords(z, rad, nonpiv, p)
        frob.append([(a - b) % p for a, b in zip(img, zc)])
    ker = fpla.left_kernel(frob, len(centre), m, p)
    berl = [fpla.vec_mat(k, centre, p) for k in ker]
    s = len(berl)
    idems = _split_idempotents(R, rad, berl, s)
    primes = []
    for e in idems:
        images = [_quotient_coords(R.mul(e, w), rad, nonpiv, p) for w in R.basis()]
        kvecs = fpla.left_kernel(images, n, m, p)
        space = fpla.rref(kvecs, n, p)
        lat = R.lattice_of(space[0])
        if comm:
            f = n - len(space[1])
        else:
            f = _centre_degree(R, e, centre, rad, nonpiv)
        P = PrimeIdeal(order, p, lat, f, space, idempotent=e)
        if comm:
            _attach_residue_field(R, P)
        primes.append(P)
    primes.sort(key=lambda P: P.key)
    return primes


def _centre_degree(R: ModP, e, centre, rad, nonpiv):
    p = R.p
    vecs = [_quotient_coords(R.mul(e, z), rad, nonpiv, p) for z in centre]
    return fpla.rank(vecs, len(nonpiv), p)


def _attach_residue_field(R: ModP, P: PrimeIdeal):
    p, n, f = R.p, R.n, P.f
    space = P.space
    rng = random.Random(p * 7919 + f)
    candidates = [R.unit(i) for i in range(n)]
    tries = 0
    while True:
        if candidates:
            a = candidates.pop(0)
        else:
            a = [rng.randrange(p) for _ in range(n)]
            tries += 1
            if tries > 1000:
                raise ArithmeticError("no residue field generator found")  # pragma: no cover
        poly, powers = _krylov_minpoly(R, a, R.one, space)
        if len(poly) - 1 == f:
            break
    P.residue_field = FiniteField(p, f, tuple(poly))
    P.alpha = a
    M = [list(v) for v in powers] + [list(r) for r in space[0]]
    P._coord_inv = fpla.inverse(M, p)


def residue_degree_sum(order: Order, p: int) -> int:
    return sum(P.f for P in prime_ideals_over(order, p))


# ---------------------------------------------------------------------------
# primary parts


def primary_part(Q: QuotientModule, p: int) -> Lattice:
    """Preimage in the numerator of the p-power torsion of ``Q``."""
    gens = []
    for d, g in zip(Q.divisors, Q.gens):
        m = d
        while m % p == 0:
            m //= p
        if m != d:
            gens.append([m * x for x in g])
    base = Q.denominator
    if not gens:
        return base
    D = Q.numerator.den
    while D % base.den:
        D *= base.den
    s = D // Q.numerator.den
    rows = [[s * x for x in g] for g in gens] + base.scaled_rows(D)
    return Lattice.from_int_rows(base.algebra, rows, D)


def P_primary_part(Gamma: Order, Lam: Order, P: PrimeIdeal) -> Order:
    """``{x in Gamma : P^k x in Lam for some k}`` by ascending colon saturation."""
    if not Gamma.lattice.contains_lattice(Lam.lattice):
        raise ValueError("base order is not contained in the overorder")
    cur = Lam.lattice
    while True:
        nxt = lattice_intersect(Gamma.lattice, colon(cur, P.lattice, "left"))
        nxt = lattice_sum(nxt, cur)
        if nxt == cur:
            break
        cur = nxt
    return order_from_lattice(cur)


# ---------------------------------------------------------------------------
# maximal orders


def multiplier_ring(I: Lattice) -> Lattice:
    A = I.algebra
    left = colon(I, I, "left")
    if A.commutative:
        return left
    return lattice_intersect(left, colon(I, I, "right"))


def p_maximal_overorder(order: Order, p: int) -> Order:
    """An overorder of p-power index that is maximal at ``p``."""
    return order.cached(("pmax", p), lambda: _p_maximal(order, p))


def _p_maximal(order: Order, p: int) -> Order:
    cur = order
    while True:
        J = p_radical(cur, p)
        nxt = multiplier_ring(J)
        if nxt == cur.lattice:
            break
        cur = Order(nxt)
    if not order.algebra.commutative:
        from .engine.generic import minimal_overrings

        while True:
            mins = minimal_overrings(cur, cur.lattice.scale(Fraction(1, p)))
            if not mins:
                break
            cur = mins[0]
    return cur


def relevant_primes(order: Order) -> list[int]:
    """Primes p with ``p^2`` dividing the discriminant."""
    d = abs(order.discriminant())
    if d == 0:
        raise ValueError("degenerate trace form")
    return sorted(q for q, e in factorint(d).items() if e >= 2)


def maximal_order(order: Order) -> Order:
    """The maximal order (commutative case) or a maximal overorder."""

    def compute():
        cur = order
        for p in relevant_primes(order):
            cur = p_maximal_overorder(cur, p)
        return cur

    return order.cached("maximal", compute)


def is_gorenstein_at(order: Order, P: PrimeIdeal) -> bool:
    """``(order : P)/order`` is one-dimensional over ``order/P``."""

    def compute():
        C = colon(order.lattice, P.lattice, "left")
        return index_ideal(C, order.lattice) == P.q

    return order.cached(("gorenstein", P.lattice.key), compute)


def is_bass_at(order: Order, P: PrimeIdeal) -> bool:
    """``dim_{order/P}(O / P O) <= 2`` for the (p-)maximal overorder O."""

    def compute():
        O = p_maximal_overorder(order, P.p)
        PO = lattice_product(P.lattice, O.lattice)
        return index_ideal(O.lattice, PO) <= P.q**2

    return order.cached(("bass", P.lattice.key), compute)
