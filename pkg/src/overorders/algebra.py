"""Finite-dimensional Q-algebras given by structure constants.

An :class:`Algebra` stores the product of basis elements ``b_i * b_j`` as a
vector of rational coordinates.  Internally the table is also kept as sparse
integer lists over a common denominator, which is what the lattice code uses.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import sympy

from .exactla import kernels


class AlgebraError(ValueError):
    """Raised for malformed algebra input."""


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _frac(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


class Algebra:
    """A Q-algebra with a distinguished basis ``b_0, ..., b_{n-1}``.

    ``table[i][j]`` is the coordinate vector of ``b_i * b_j`` and ``one`` the
    coordinate vector of the identity.  Construction verifies associativity
    and the identity on all basis triples and pairs.
    """

    def __init__(self, table, one, labels=None, etale_presentation=None, check=True):
        n = len(table)
        if n == 0:
            raise AlgebraError("algebra must have positive dimension")
        tab = []
        for i, row in enumerate(table):
            if len(row) != n:
                raise AlgebraError(f"row {i} of the multiplication table has length {len(row)}, expected {n}")
            out = []
            for j, vec in enumerate(row):
                if len(vec) != n:
                    raise AlgebraError(f"product b_{i}*b_{j} has {len(vec)} coordinates, expected {n}")
                out.append(tuple(_frac(c) for c in vec))
            tab.append(out)
        if len(one) != n:
            raise AlgebraError("identity vector has the wrong length")
        self.dim = n
        self.table = tab
        self.one = tuple(_frac(c) for c in one)
        self.labels = list(labels) if labels else [f"b{i}" for i in range(n)]
        self.etale_presentation = etale_presentation

        den = 1
        for row in tab:
            for vec in row:
                for c in vec:
                    den = _lcm(den, c.denominator)
        self.table_den = den
        # sparse integer table: itable[i][j] = [(k, c), ...] with b_i b_j = sum c b_k / den
        self.itable = [
            [[(k, int(c * den)) for k, c in enumerate(vec) if c] for vec in row] for row in tab
        ]
        self.commutative = all(tab[i][j] == tab[j][i] for i in range(n) for j in range(i + 1, n))
        if check:
            self._check_identity()
            self._check_associative()

    # -- validation -----------------------------------------------------
    def _check_identity(self):
        n = self.dim
        for i in range(n):
            e = [Fraction(int(i == k)) for k in range(n)]
            if list(self.mul(self.one, e)) != e or list(self.mul(e, self.one)) != e:
                raise AlgebraError(f"the given identity does not act as identity on basis element {i}")

    def _check_associative(self):
        n = self.dim
        basis = [[int(i == k) for k in range(n)] for i in range(n)]
        prods = [[self.mul_int(basis[i], basis[j]) for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(n):
                bij = prods[i][j]
                for k in range(n):
                    left = self.mul_int(bij, basis[k])
                    right = self.mul_int(basis[i], prods[j][k])
                    if left != right:
                        raise AlgebraError(f"multiplication is not associative: (b{i}*b{j})*b{k} != b{i}*(b{j}*b{k})")

    # -- arithmetic on coordinate vectors -------------------------------
    def mul_int(self, u, v):
        """Integer product: ``u * v == mul_int(u, v) / table_den`` for integer vectors."""
        return kernels.mul_mod(list(u), list(v), self.itable, 0)

    def mul(self, a, b):
        """Product of two rational coordinate vectors."""
        da = 1
        for c in a:
            da = _lcm(da, Fraction(c).denominator)
        db = 1
        for c in b:
            db = _lcm(db, Fraction(c).denominator)
        ua = [int(Fraction(c) * da) for c in a]
        ub = [int(Fraction(c) * db) for c in b]
        w = self.mul_int(ua, ub)
        D = da * db * self.table_den
        return tuple(Fraction(x, D) for x in w)

    def element(self, coords) -> AlgebraElement:
        return AlgebraElement(self, tuple(_frac(c) for c in coords))

    def basis_element(self, i: int) -> AlgebraElement:
        return self.element([int(i == k) for k in range(self.dim)])

    def identity(self) -> AlgebraElement:
        return AlgebraElement(self, self.one)

    def __repr__(self):
        kind = "commutative" if self.commutative else "noncommutative"
        return f"Algebra(dim={self.dim}, {kind})"

    # -- serialization ----------------------------------------------------
    def to_json(self) -> str:
        def s(c):
            c = Fraction(c)
            return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"

        return json.dumps(
            {
                "dim": self.dim,
                "one": [s(c) for c in self.one],
                "table": [[[s(c) for c in vec] for vec in row] for row in self.table],
            }
        )


@dataclass(frozen=True)
class AlgebraElement:
    parent: Algebra
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.parent.dim:
            raise AlgebraError("coordinate length does not match the algebra dimension")

    def __add__(self, other):
        return AlgebraElement(self.parent, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return AlgebraElement(self.parent, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return AlgebraElement(self.parent, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return AlgebraElement(self.parent, self.parent.mul(self.coords, other.coords))
        c = Fraction(other)
        return AlgebraElement(self.parent, tuple(a * c for a in self.coords))

    def __rmul__(self, other):
        c = Fraction(other)
        return AlgebraElement(self.parent, tuple(a * c for a in self.coords))

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported")
        result = self.parent.identity()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __repr__(self):
        return f"AlgebraElement({[str(c) for c in self.coords]})"


# -- integer polynomials (coefficient lists, lowest degree first) ----------

def poly_mul(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return out


def poly_sub(f, g):
    n = max(len(f), len(g))
    out = [(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0) for i in range(n)]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def poly_rem_monic(f, m):
    """Remainder of an integer polynomial modulo a monic one."""
    f = list(f)
    d = len(m) - 1
    for top in range(len(f) - 1, d - 1, -1):
        c = f[top]
        if c:
            for i in range(d + 1):
                f[top - d + i] -= c * m[i]
    out = f[:d] + [0] * max(0, d - len(f))
    return out


def _to_sympy(f):
    x = sympy.Symbol("x")
    return sympy.Poly(list(reversed(f)), x, domain="QQ")


def from_polynomial(factors) -> Algebra:
    """``Q[x]/(F)`` with ``F`` the product of the given monic integer polynomials.

    Each factor is a coefficient list, lowest degree first.  The basis is the
    power basis ``1, x, ..., x^(n-1)``.
    """
    factors = [[int(c) for c in f] for f in factors]
    if not factors:
        raise AlgebraError("need at least one polynomial")
    for f in factors:
        while len(f) > 1 and f[-1] == 0:
            f.pop()
        if len(f) < 2:
            raise AlgebraError("constant polynomial")
        if f[-1] != 1:
            raise AlgebraError("polynomials must be monic")
    F = [1]
    for f in factors:
        F = poly_mul(F, f)
    PF = _to_sympy(F)
    if sympy.gcd(PF, PF.diff()).degree() > 0:
        raise AlgebraError("polynomial is not squarefree")
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            if sympy.gcd(_to_sympy(factors[i]), _to_sympy(factors[j])).degree() > 0:
                raise AlgebraError("factors are not pairwise coprime")
    n = len(F) - 1
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            mono = [0] * (i + j) + [1]
            row.append(poly_rem_monic(mono, F))
        table.append(row)
    one = [1] + [0] * (n - 1)
    labels = ["1"] + [f"x^{i}" if i > 1 else "x" for i in range(1, n)]
    # identity and associativity hold by construction
    A = Algebra(table, one, labels=labels, etale_presentation=[tuple(f) for f in factors], check=False)
    return A


def from_structure_constants(table, identity_coords) -> Algebra:
    """Algebra from an explicit table; associativity and identity are verified."""
    return Algebra(table, identity_coords, check=True)


def algebra_from_json(text: str) -> Algebra:
    """Parse ``{dim, one, table}`` with rationals written as ``"p/q"`` strings."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraError(f"invalid JSON: {exc}") from None
    for key in ("dim", "one", "table"):
        if key not in data:
            raise AlgebraError(f"missing key {key!r}")
    n = int(data["dim"])
    if len(data["table"]) != n:
        raise AlgebraError("table size does not match dim")
    return from_structure_constants(data["table"], data["one"])


def regular_representations(x: AlgebraElement):
    """Matrices ``(L_x, R_x)`` of left and right multiplication by ``x``.

    Matrices act on column coordinate vectors: column ``j`` of ``L_x`` holds
    the coordinates of ``x*b_j``.  Hence ``L_{xy} = L_x L_y`` and
    ``R_{xy} = R_y R_x``.
    """
    A = x.parent
    n = A.dim
    L_rows = [A.mul(x.coords, [int(i == k) for k in range(n)]) for i in range(n)]
    R_rows = [A.mul([int(i == k) for k in range(n)], x.coords) for i in range(n)]
    L = [[L_rows[j][i] for j in range(n)] for i in range(n)]
    R = [[R_rows[j][i] for j in range(n)] for i in range(n)]
    return L, R


def trace_of(x: AlgebraElement) -> Fraction:
    """Trace of left multiplication by ``x``."""
    A = x.parent
    n = A.dim
    total = Fraction(0)
    for i in range(n):
        e = [int(i == k) for k in range(n)]
        total += A.mul(x.coords, e)[i]
    return total


def _basis_traces(A: Algebra):
    # Tr(L_{b_k}) for every basis element
    n = A.dim
    return [sum((A.table[k][i][i] for i in range(n)), Fraction(0)) for k in range(n)]


def trace_form(A: Algebra):
    """Gram matrix ``T[i][j] = Tr(L_{b_i b_j})`` of the regular trace."""
    n = A.dim
    tr = _basis_traces(A)
    T = []
    for i in range(n):
        row = []
        for j in range(n):
            vec = A.table[i][j]
            row.append(sum((c * tr[k] for k, c in enumerate(vec) if c), Fraction(0)))
        T.append(row)
    return T


def central_idempotents_from_factors(A: Algebra):
    """Primitive idempotents of ``Q[x]/(f_1 ... f_r)`` attached to the factors.

    ``e_i`` is 1 modulo ``f_i`` and 0 modulo the other factors (CRT over Q).
    """
    pres = A.etale_presentation
    if not pres or len(pres) < 2:
        raise AlgebraError("need an etale presentation with at least two factors")
    x = sympy.Symbol("x")
    polys = [sympy.Poly(list(reversed(f)), x, domain="QQ") for f in pres]
    F = sympy.Poly(1, x, domain="QQ")
    for P in polys:
        F = F * P
    out = []
    for P in polys:
        cof = sympy.Poly(sympy.quo(F.as_expr(), P.as_expr(), x), x, domain="QQ")
        # s*cof + t*P = 1, so e = s*cof is 1 mod P and 0 mod the others
        s, t, g = sympy.gcdex(cof, P)
        e = (s * cof).rem(F)
        coeffs = list(reversed(e.all_coeffs()))
        coeffs = [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in coeffs]
        coeffs += [Fraction(0)] * (A.dim - len(coeffs))
        out.append(A.element(coeffs))
    return out


def check_central_idempotent(e: AlgebraElement) -> None:
    A = e.parent
    if (e * e).coords != e.coords:
        raise AlgebraError("element is not idempotent")
    for i in range(A.dim):
        b = A.basis_element(i)
        if (e * b).coords != (b * e).coords:
            raise AlgebraError("element is not central")


def is_decomposable(order, idempotents):
    """Search the ``2^(r-1) - 1`` complementary sums of the given idempotents.

    Returns ``(e, order_1, order_2)`` for the first sum ``e`` lying in the
    order, where ``order_1 = e*order`` and ``order_2 = (1-e)*order`` are
    returned as orders of ``eA`` and ``(1-e)A`` (see :func:`split_order`), or
    ``None`` if no sum lies in the order.
    """
    from .order import split_order

    idempotents = list(idempotents)
    for e in idempotents:
        check_central_idempotent(e)
    r = len(idempotents)
    A = order.algebra
    for mask in range(1, 2 ** (r - 1)):
        e = AlgebraElement(A, tuple(Fraction(0) for _ in range(A.dim)))
        for i in range(r - 1):
            if mask >> i & 1:
                e = e + idempotents[i]
        if order.lattice.contains(e.coords):
            part1 = split_order(order, e)
            part2 = split_order(order, A.identity() - e)
            return e, part1, part2
    return None
