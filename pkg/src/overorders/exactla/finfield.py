"""Finite fields F_{p^f} and dense matrices over them.

Field elements are integers in ``range(q)``; the base-p digits of an element
are the coefficients of its representative polynomial modulo the field
modulus, lowest degree first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from sympy import isprime

from . import polyfp


@dataclass(frozen=True)
class FiniteField:
    p: int
    f: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.f

    def __str__(self):
        return f"F_{self.p}^{self.f}" if self.f > 1 else f"F_{self.p}"

    # conversions
    def to_coeffs(self, a: int) -> list[int]:
        out = []
        for _ in range(self.f):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_coeffs(self, coeffs) -> int:
        c = polyfp.rem(polyfp.normalize(coeffs, self.p), list(self.modulus), self.p)
        return self._pack(c)

    def __call__(self, a: int) -> int:
        return self.from_coeffs([a])

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def generator(self) -> int:
        """Class of the polynomial variable modulo the field modulus."""
        return self.from_coeffs([0, 1])

    def elements(self):
        return range(self.q)

    # arithmetic
    def add(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a + b) % self.p
        x, y = self.to_coeffs(a), self.to_coeffs(b)
        return self._pack([(u + v) % self.p for u, v in zip(x, y)])

    def neg(self, a: int) -> int:
        if self.f == 1:
            return (-a) % self.p
        return self._pack([(-u) % self.p for u in self.to_coeffs(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a * b) % self.p
        prod = polyfp.mul(polyfp.trim(self.to_coeffs(a)), polyfp.trim(self.to_coeffs(b)), self.p)
        return self._pack(polyfp.rem(prod, list(self.modulus), self.p))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.f == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def _pack(self, coeffs) -> int:
        a = 0
        for c in reversed(list(coeffs) + [0] * (self.f - len(coeffs))):
            a = a * self.p + c
        return a


@lru_cache(maxsize=None)
def ff_make(p: int, f: int = 1) -> FiniteField:
    """The field with ``p^f`` elements.

    The modulus is the first irreducible monic polynomial of degree ``f`` in
    lexicographic order of its coefficient vector (constant term varying
    fastest after the leading 1), so fields are reproducible across runs.
    """
    if not isinstance(p, int) or not isprime(p):
        raise ValueError(f"{p} is not prime")
    if f < 1:
        raise ValueError("extension degree must be at least 1")
    if f == 1:
        return FiniteField(p, 1, (0, 1))
    for tail in itertools.product(range(p), repeat=f):
        g = list(reversed(tail)) + [1]
        if g[0] == 0:
            continue
        if polyfp.is_irreducible(g, p):
            return FiniteField(p, f, tuple(g))
    raise RuntimeError(f"no irreducible polynomial of degree {f} over F_{p}")  # pragma: no cover


class FFMatrix:
    """Dense matrix over a :class:`FiniteField`."""

    def __init__(self, field: FiniteField, rows):
        self.field = field
        self.rows = [[field(x) if field.f == 1 else x for x in r] for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged matrix")

    def __eq__(self, other):
        return isinstance(other, FFMatrix) and self.field == other.field and self.rows == other.rows

    def __repr__(self):
        return f"FFMatrix({self.field}, {self.rows})"

    def mul_vec(self, v):
        F = self.field
        out = []
        for r in self.rows:
            acc = 0
            for a, b in zip(r, v):
                if a and b:
                    acc = F.add(acc, F.mul(a, b))
            out.append(acc)
        return out

    def rref(self):
        F = self.field
        A = [list(r) for r in self.rows]
        pivots = []
        r = 0
        for c in range(self.ncols):
            piv = next((i for i in range(r, self.nrows) if A[i][c]), None)
            if piv is None:
                continue
            A[r], A[piv] = A[piv], A[r]
            inv = F.inv(A[r][c])
            A[r] = [F.mul(inv, x) for x in A[r]]
            for i in range(self.nrows):
                if i != r and A[i][c]:
                    a = A[i][c]
                    A[i] = [F.sub(x, F.mul(a, y)) for x, y in zip(A[i], A[r])]
            pivots.append(c)
            r += 1
            if r == self.nrows:
                break
        return A[:r], pivots

    def rank(self) -> int:
        return len(self.rref()[1])


def ff_kernel(M: FFMatrix) -> list[list[int]]:
    """Basis of ``{v : M v = 0}``, one basis vector per free column."""
    F = M.field
    R, pivots = M.rref()
    free = [c for c in range(M.ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * M.ncols
        v[fc] = 1
        for row, pc in zip(R, pivots):
            v[pc] = F.neg(row[fc])
        basis.append(v)
    return basis
