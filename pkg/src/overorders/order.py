"""Lattices, orders and the colon/index/discriminant toolkit.

A :class:`Lattice` is a full-rank Z-lattice in an :class:`~overorders.algebra.Algebra`
stored as ``(den, H)`` where ``H`` is an upper-triangular row HNF and the
rows of ``H / den`` form a Z-basis.  ``den`` is minimal, so the pair is a
canonical key: two lattices are equal exactly when their keys agree.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod

from .algebra import Algebra, AlgebraError, trace_form
from .exactla import kernels
from .exactla.intmat import det, hnf, snf_with_transforms, inverse_unimodular


class LatticeError(ValueError):
    """Raised for rank, containment or ambient-algebra violations."""


class OrderError(ValueError):
    """Raised when a lattice is not an order; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def _lcm(a, b):
    return a // gcd(a, b) * b


def _common_den(vecs) -> int:
    d = 1
    for v in vecs:
        for c in v:
            if isinstance(c, Fraction):
                d = _lcm(d, c.denominator)
    return d


def _canonical(den: int, H):
    g = den
    for row in H:
        for x in row:
            if x:
                g = gcd(g, x)
                if g == 1:
                    break
        if g == 1:
            break
    if g > 1:
        den //= g
        H = tuple(tuple(x // g for x in row) for row in H)
    else:
        H = tuple(tuple(row) for row in H)
    return den, H


class Lattice:
    """Full-rank lattice ``rows(H)/den`` in an algebra."""

    __slots__ = ("algebra", "den", "hnf", "_hash")

    def __init__(self, algebra: Algebra, den: int, hnf_rows, _canon=False):
        if not _canon:
            den, hnf_rows = _canonical(den, hnf_rows)
        self.algebra = algebra
        self.den = den
        self.hnf = hnf_rows
        self._hash = None

    # -- construction ---------------------------------------------------
    @classmethod
    def from_int_rows(cls, algebra: Algebra, rows, den: int = 1, modulus: int | None = None) -> Lattice:
        """Lattice spanned by ``rows/den``; ``modulus`` must lie in the scaled lattice times Z^n."""
        n = algebra.dim
        rows = [list(r) for r in rows]
        if modulus is not None:
            H = kernels.hnf_mod(rows, n, modulus)
        else:
            Hfull, _ = hnf(rows)
            H = Hfull[:n]
            if len(H) < n or any(H[i][i] == 0 for i in range(n)):
                raise LatticeError("generators do not span a full-rank lattice")
            H = tuple(tuple(r) for r in H)
        den, H = _canonical(den, H)
        return cls(algebra, den, H, _canon=True)

    @classmethod
    def from_vectors(cls, algebra: Algebra, vecs, modulus_hint: Lattice | None = None) -> Lattice:
        """Lattice generated by rational coordinate vectors."""
        vecs = [[Fraction(c) for c in v] for v in vecs]
        d = _common_den(vecs)
        if modulus_hint is not None:
            d = _lcm(d, modulus_hint.den)
        rows = [[int(c * d) for c in v] for v in vecs]
        modulus = None
        if modulus_hint is not None:
            s = d // modulus_hint.den
            modulus = prod(modulus_hint.hnf[i][i] for i in range(algebra.dim)) * s ** algebra.dim
        return cls.from_int_rows(algebra, rows, d, modulus)

    @classmethod
    def standard(cls, algebra: Algebra) -> Lattice:
        n = algebra.dim
        return cls(algebra, 1, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), _canon=True)

    # -- basic data -------------------------------------------------------
    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def key(self):
        return (self.den, self.hnf)

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.algebra is other.algebra and self.key == other.key

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key)
        return self._hash

    def __repr__(self):
        return f"Lattice(den={self.den}, hnf={[list(r) for r in self.hnf]})"

    def basis(self):
        """Z-basis as rational coordinate vectors."""
        d = self.den
        return [[Fraction(x, d) for x in row] for row in self.hnf]

    def volume(self) -> Fraction:
        """Covolume relative to the standard lattice of the basis."""
        return Fraction(prod(self.hnf[i][i] for i in range(self.dim)), self.den**self.dim)

    def scaled_rows(self, D: int):
        """Integer rows of ``D * lattice``; ``D`` must be a multiple of ``den``."""
        s, r = divmod(D, self.den)
        if r:
            raise LatticeError("scale is not a multiple of the denominator")
        if s == 1:
            return [list(row) for row in self.hnf]
        return [[s * x for x in row] for row in self.hnf]

    # -- membership -------------------------------------------------------
    def int_coords(self, vec):
        """Integer coordinates of a rational vector in the lattice basis, or ``None``."""
        d = self.den
        w = []
        for c in vec:
            c = Fraction(c) * d
            if c.denominator != 1:
                return None
            w.append(c.numerator)
        return kernels.solve_upper(self.hnf, w)

    def coords_of_int(self, w, dw: int = 1):
        """Coordinates of ``w/dw`` for an integer vector ``w``, or ``None``."""
        d = self.den
        if dw == d:
            return kernels.solve_upper(self.hnf, list(w))
        g = gcd(d, dw)
        num = d // g
        den = dw // g
        if den != 1:
            if any(x * num % den for x in w):
                return None
            return kernels.solve_upper(self.hnf, [x * num // den for x in w])
        return kernels.solve_upper(self.hnf, [x * num for x in w])

    def contains(self, vec) -> bool:
        return self.int_coords(vec) is not None

    def contains_lattice(self, other: Lattice) -> bool:
        if other.algebra is not self.algebra:
            raise LatticeError("lattices live in different algebras")
        if self.volume() > other.volume():
            return False
        return all(self.coords_of_int(row, other.den) is not None for row in other.hnf)

    def __le__(self, other):
        return other.contains_lattice(self)

    def scale(self, c) -> Lattice:
        c = Fraction(c)
        if c <= 0:
            raise LatticeError("can only scale by a positive rational")
        H = self.hnf
        if c.numerator != 1:
            H = tuple(tuple(c.numerator * x for x in row) for row in H)
        return Lattice(self.algebra, self.den * c.denominator, H)

    def to_json(self) -> dict:
        return {"den": str(self.den), "hnf": [[str(x) for x in row] for row in self.hnf]}

    @classmethod
    def from_json(cls, algebra: Algebra, data) -> Lattice:
        if isinstance(data, str):
            data = json.loads(data)
        den = int(data["den"])
        rows = [[int(x) for x in row] for row in data["hnf"]]
        return cls.from_int_rows(algebra, rows, den)


def _check_same(L1: Lattice, L2: Lattice):
    if L1.algebra is not L2.algebra:
        raise LatticeError("lattices live in different algebras")


def lattice_sum(L1: Lattice, L2: Lattice) -> Lattice:
    _check_same(L1, L2)
    n = L1.dim
    D = _lcm(L1.den, L2.den)
    r1 = L1.scaled_rows(D)
    r2 = L2.scaled_rows(D)
    m1 = prod(r1[i][i] for i in range(n))
    m2 = prod(r2[i][i] for i in range(n))
    H = kernels.hnf_mod(r1 + r2, n, min(m1, m2))
    den, H = _canonical(D, H)
    return Lattice(L1.algebra, den, H, _canon=True)


def lattice_sum_many(lattices) -> Lattice:
    lattices = list(lattices)
    if not lattices:
        raise LatticeError("empty sum")
    A = lattices[0].algebra
    n = A.dim
    D = 1
    for L in lattices:
        _check_same(lattices[0], L)
        D = _lcm(D, L.den)
    rows = []
    modulus = None
    for L in lattices:
        r = L.scaled_rows(D)
        m = prod(r[i][i] for i in range(n))
        modulus = m if modulus is None else min(modulus, m)
        rows.extend(r)
    H = kernels.hnf_mod(rows, n, modulus)
    den, H = _canonical(D, H)
    return Lattice(A, den, H, _canon=True)


def lattice_intersect(L1: Lattice, L2: Lattice) -> Lattice:
    """Intersection via the HNF of ``[[B1, B1], [B2, 0]]``."""
    _check_same(L1, L2)
    n = L1.dim
    D = _lcm(L1.den, L2.den)
    B1 = L1.scaled_rows(D)
    B2 = L2.scaled_rows(D)
    M = [r + r for r in B1] + [r + [0] * n for r in B2]
    H, _ = hnf(M)
    rows = [row[n:] for row in H[n : 2 * n]]
    return Lattice.from_int_rows(L1.algebra, rows, D)


def products(L1: Lattice, L2: Lattice):
    """All basis products as integer vectors over the common denominator."""
    A = L1.algebra
    out = []
    for u in L1.hnf:
        for v in L2.hnf:
            out.append(A.mul_int(u, v))
    return out, L1.den * L2.den * A.table_den


def lattice_product(L1: Lattice, L2: Lattice) -> Lattice:
    """Lattice generated by all products ``x*y`` with ``x`` in L1, ``y`` in L2."""
    _check_same(L1, L2)
    rows, D = products(L1, L2)
    A = L1.algebra
    n = A.dim
    modulus = None
    # if one factor contains 1 the product contains the other factor
    for a, b in ((L1, L2), (L2, L1)):
        if a.contains(A.one):
            s = D // b.den
            modulus = prod(b.hnf[i][i] for i in range(n)) * s**n
            break
    return Lattice.from_int_rows(A, rows, D, modulus)


def colon(X: Lattice, Y: Lattice, side: str = "left") -> Lattice:
    """``(X : Y)``: left ``{a : aY in X}`` or right ``{a : Ya in X}``.

    The constraints ``a*y_j`` in X for the basis ``y_j`` of Y give a rational
    matrix ``M`` with ``c M`` integral; the solution lattice is read off from
    the column HNF of ``M``.
    """
    _check_same(X, Y)
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    A = X.algebra
    n = A.dim
    if A.commutative:
        side = "left"
    # X-coordinates of e_i * y_j are (e_i*y_j)*den_X solved against H_X
    dX = X.den
    scale = dX
    cols_per_i = []
    denom = Y.den * A.table_den
    for i in range(n):
        e = [int(i == k) for k in range(n)]
        row = []
        for y in Y.hnf:
            w = A.mul_int(e, y) if side == "left" else A.mul_int(y, e)
            row.append(_solve_rational(X.hnf, [x * scale for x in w]))
        cols_per_i.append(row)
    # row_i of M = concat_j coords(e_i y_j) / denom  (coords are Fractions already)
    M = []
    for i in range(n):
        r = []
        for vec in cols_per_i[i]:
            r.extend(vec)
        M.append(r)
    Dm = denom
    for r in M:
        for c in r:
            Dm = _lcm(Dm, (Fraction(c) / denom).denominator)
    Mint = [[int(Fraction(c) / denom * Dm) for c in r] for r in M]
    # column HNF: row HNF of the transpose
    MT = [list(col) for col in zip(*Mint)]
    H, _ = hnf(MT)
    C_T = H[:n]
    if any(C_T[i][i] == 0 for i in range(n)):
        raise LatticeError("colon computation needs full-rank lattices")
    C = [[C_T[j][i] for j in range(n)] for i in range(n)]  # lower triangular
    Cinv = _inverse_lower(C)
    gens = [[Dm * c for c in row] for row in Cinv]
    return Lattice.from_vectors(A, gens)


def _solve_rational(H, w):
    """Rational ``x`` with ``x*H == w`` for upper-triangular integer ``H``."""
    n = len(H)
    x = [Fraction(0)] * n
    w = [Fraction(c) for c in w]
    for j in range(n):
        q = w[j] / H[j][j]
        x[j] = q
        if q:
            for k in range(j + 1, n):
                w[k] -= q * H[j][k]
    return x


def _inverse_lower(C):
    n = len(C)
    inv = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        inv[i][i] = Fraction(1, C[i][i])
        for j in range(i - 1, -1, -1):
            s = sum((C[i][k] * inv[k][j] for k in range(j, i)), Fraction(0))
            inv[i][j] = -s / C[i][i]
    return inv


def index_ideal(Gamma: Lattice, Lam: Lattice) -> int:
    """``|Gamma / Lam|`` for ``Lam`` contained in ``Gamma``."""
    if not Gamma.contains_lattice(Lam):
        raise LatticeError("index requires containment")
    q = Lam.volume() / Gamma.volume()
    if q.denominator != 1:
        raise LatticeError("non-integral index")  # pragma: no cover
    return q.numerator


def canonical_form(L) -> tuple:
    if isinstance(L, Order):
        L = L.lattice
    return L.key


def orders_equal(a, b) -> bool:
    return canonical_form(a) == canonical_form(b)


def transition_matrix(Gamma: Lattice, Lam: Lattice):
    """Integer matrix whose rows are the basis of Lam in the basis of Gamma."""
    rows = []
    for r in Lam.hnf:
        c = Gamma.coords_of_int(r, Lam.den)
        if c is None:
            raise LatticeError("lattice is not contained in the ambient lattice")
        rows.append(c)
    return rows


# ---------------------------------------------------------------------------
# orders


class Order:
    """An order: a lattice containing 1 and closed under multiplication.

    Use :func:`order_from_lattice` to build one with verification.  Caches are
    filled once under a lock, so concurrent readers never see partial values.
    """

    def __init__(self, lattice: Lattice):
        self.lattice = lattice
        self._lock = threading.RLock()
        self._cache = {}

    @property
    def algebra(self) -> Algebra:
        return self.lattice.algebra

    @property
    def dim(self) -> int:
        return self.lattice.dim

    @property
    def key(self):
        return self.lattice.key

    @property
    def den(self):
        return self.lattice.den

    @property
    def hnf(self):
        return self.lattice.hnf

    def __eq__(self, other):
        return isinstance(other, Order) and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.lattice)

    def __repr__(self):
        return f"Order(den={self.den}, hnf={[list(r) for r in self.hnf]})"

    def cached(self, name, fn):
        try:
            return self._cache[name]
        except KeyError:
            pass
        with self._lock:
            if name not in self._cache:
                self._cache[name] = fn()
            return self._cache[name]

    def basis(self):
        return self.lattice.basis()

    def structure_constants(self):
        """``(table, one)`` of the order in its own basis.

        ``table[i][j]`` is a sparse list ``[(k, c), ...]`` of integer coordinates
        of ``w_i * w_j``; ``one`` holds the coordinates of the identity.
        """
        return self.cached("structure", self._structure)

    def _structure(self):
        L = self.lattice
        A = L.algebra
        D = L.den * L.den * A.table_den
        table = []
        for u in L.hnf:
            row = []
            for v in L.hnf:
                c = L.coords_of_int(A.mul_int(u, v), D)
                if c is None:
                    raise OrderError("order is not closed under multiplication")  # pragma: no cover
                row.append([(k, x) for k, x in enumerate(c) if x])
            table.append(row)
        one = L.int_coords(A.one)
        return table, one

    def discriminant(self):
        return self.cached("disc", lambda: discriminant(self))

    def to_json(self) -> dict:
        return self.lattice.to_json()


def order_from_lattice(L: Lattice) -> Order:
    """Verify that ``L`` contains 1 and is multiplicatively closed."""
    A = L.algebra
    if not L.contains(A.one):
        raise OrderError("lattice does not contain 1")
    D = L.den * L.den * A.table_den
    basis = L.basis()
    for i, u in enumerate(L.hnf):
        for j, v in enumerate(L.hnf):
            if L.coords_of_int(A.mul_int(u, v), D) is None:
                raise OrderError(
                    f"basis elements {i} and {j} multiply outside the lattice",
                    witness=(basis[i], basis[j]),
                )
    return Order(L)


def order_from_basis(algebra: Algebra, vecs) -> Order:
    return order_from_lattice(Lattice.from_vectors(algebra, vecs))


def equation_order(algebra: Algebra) -> Order:
    """The Z-span of the distinguished basis (``Z[x]/(f)`` for polynomial algebras)."""
    return order_from_lattice(Lattice.standard(algebra))


def discriminant(order) -> int:
    """Determinant of the regular-trace Gram matrix on a Z-basis (sign kept)."""
    L = order.lattice if isinstance(order, Order) else order
    A = L.algebra
    n = A.dim
    T = trace_form(A)
    DT = _common_den(T)
    Tint = [[int(c * DT) for c in row] for row in T]
    H = [list(r) for r in L.hnf]
    HT = [[H[j][i] for j in range(n)] for i in range(n)]
    G = _matmul(_matmul(H, Tint), HT)
    d = Fraction(det(G), DT**n * L.den ** (2 * n))
    return d.numerator if d.denominator == 1 else d


def _matmul(A, B):
    Bt = list(zip(*B))
    return [[sum(x * y for x, y in zip(r, c)) for c in Bt] for r in A]


# ---------------------------------------------------------------------------
# quotient modules


@dataclass
class QuotientModule:
    """``numerator / denominator`` with its Smith presentation.

    ``gens[i]`` (integer vectors over ``numerator.den``) generates a cyclic
    factor of order ``divisors[i]``; factors of order 1 are dropped.  The
    acting order (if any) contributes ``left``/``right`` action matrices:
    ``left[t][i]`` is the coordinate vector of ``w_t * gens[i]``.
    """

    numerator: Lattice
    denominator: Lattice
    divisors: list
    gens: list
    acting: Order | None = None
    left: list = field(default_factory=list)
    right: list = field(default_factory=list)
    _to_gens: list = field(default_factory=list, repr=False)

    @property
    def order(self) -> int:
        return prod(self.divisors)

    def coords(self, vec):
        """Coordinates (modulo the divisors) of a rational vector of the numerator."""
        c = self.numerator.int_coords(vec)
        if c is None:
            raise LatticeError("vector is not in the numerator lattice")
        return self._reduce(c)

    def _reduce(self, c):
        out = []
        for col, d in zip(self._to_gens, self.divisors):
            out.append(sum(a * b for a, b in zip(c, col)) % d)
        return out


def quotient_module(Gamma: Lattice, Lam, acting: Order | None = None, check_bimodule: bool = True) -> QuotientModule:
    """Smith presentation of ``Gamma / Lam`` with induced action matrices."""
    if isinstance(Lam, Order):
        if acting is None:
            acting = Lam
        Lam = Lam.lattice
    if isinstance(Gamma, Order):
        Gamma = Gamma.lattice
    C = transition_matrix(Gamma, Lam)
    D, U, V = snf_with_transforms(C)
    n = Gamma.dim
    # Lam basis = U^{-1} D V^{-1} e ; new Gamma basis f = V^{-1} e
    Vinv = inverse_unimodular(V)
    f_rows = _matmul(Vinv, [list(r) for r in Gamma.hnf])
    divisors = []
    gens = []
    to_gens = []
    for i in range(n):
        d = D[i][i]
        if d != 1:
            divisors.append(d)
            gens.append(f_rows[i])
            to_gens.append([V[k][i] for k in range(n)])
    Q = QuotientModule(Gamma, Lam, divisors, gens, acting, _to_gens=to_gens)
    if acting is not None:
        A = Gamma.algebra
        dd = Gamma.den * acting.den * A.table_den
        for w in acting.hnf:
            lrow, rrow = [], []
            for g in gens:
                for side, out in (("l", lrow), ("r", rrow)):
                    prodv = A.mul_int(w, g) if side == "l" else A.mul_int(g, w)
                    c = Gamma.coords_of_int(prodv, dd)
                    if c is None:
                        if check_bimodule:
                            raise LatticeError("numerator is not stable under the acting order")
                        c = [0] * n
                    out.append(Q._reduce(c))
            Q.left.append(lrow)
            Q.right.append(rrow)
    return Q


def order_ideal_structure(Q: QuotientModule):
    """Elementary divisors of the finite abelian group."""
    return list(Q.divisors)


# ---------------------------------------------------------------------------
# splitting along a central idempotent


@dataclass
class SplitPart:
    """The order ``e*Lam`` viewed inside the algebra ``eA``.

    ``basis`` holds the chosen Z-basis of ``e*Lam`` as rational vectors of the
    parent algebra; coordinates in ``algebra`` refer to that basis.
    """

    algebra: Algebra
    order: Order
    basis: list
    idempotent: list

    def to_parent(self, L: Lattice):
        """Rational generators of ``L`` mapped back to the parent algebra."""
        out = []
        for row in L.basis():
            v = [Fraction(0)] * len(self.basis[0])
            for c, b in zip(row, self.basis):
                if c:
                    v = [x + c * y for x, y in zip(v, b)]
            out.append(v)
        return out


def split_order(order: Order, e) -> SplitPart:
    """``e*order`` as an order of ``eA`` for a central idempotent ``e`` of the order."""
    A = order.algebra
    n = A.dim
    ecoords = list(e.coords) if hasattr(e, "coords") else list(e)
    gens = [A.mul(ecoords, b) for b in order.basis()]
    d = _common_den(gens)
    rows = [[int(c * d) for c in g] for g in gens]
    H, _ = hnf(rows)
    H = [r for r in H if any(r)]
    basis = [[Fraction(x, d) for x in r] for r in H]
    pivots = [next(k for k in range(n) if r[k]) for r in H]

    def coords(v):
        # v is in the Q-span of the echelon basis; solve by pivots
        v = [Fraction(c) * d for c in v]
        out = []
        for r, pc in zip(H, pivots):
            q = v[pc] / r[pc]
            out.append(q)
            if q:
                v = [a - q * b for a, b in zip(v, r)]
        if any(v):
            raise AlgebraError("element outside the component")
        return out

    table = [[coords(A.mul(bi, bj)) for bj in basis] for bi in basis]
    one = coords(ecoords)
    B = Algebra(table, one, check=False)
    part = SplitPart(B, equation_order(B), basis, ecoords)
    return part
