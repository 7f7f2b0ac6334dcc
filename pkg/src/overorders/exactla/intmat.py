"""Integer matrices: Hermite and Smith normal forms, determinants.

Matrices are plain lists of rows of Python ints. Nothing here uses
fixed-width arithmetic.
"""

from __future__ import annotations

from math import gcd

from . import kernels


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    Bt = list(zip(*B))
    return [[sum(x * y for x, y in zip(row, col)) for col in Bt] for row in A]


def check_shape(M) -> tuple[int, int]:
    rows = len(M)
    if rows == 0:
        raise ValueError("matrix must have at least one row")
    cols = len(M[0])
    if cols == 0 or any(len(r) != cols for r in M):
        raise ValueError("matrix rows must be non-empty and of equal length")
    return rows, cols


def hnf(M) -> tuple[list[list[int]], list[list[int]]]:
    """Row Hermite normal form with transform.

    Returns ``(H, U)`` where ``U`` is unimodular and ``U*M == H``. Pivots are
    positive, entries above a pivot lie in ``[0, pivot)`` and zero rows are
    moved to the bottom. Works for any rank.
    """
    m, n = check_shape(M)
    A = [list(map(int, r)) for r in M]
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            b = A[i][c]
            if not b:
                continue
            a = A[r][c]
            g, s, t = xgcd(a, b)
            a_g, b_g = a // g, b // g
            Ar, Ai, Ur, Ui = A[r], A[i], U[r], U[i]
            A[r] = [s * x + t * y for x, y in zip(Ar, Ai)]
            A[i] = [a_g * y - b_g * x for x, y in zip(Ar, Ai)]
            U[r] = [s * x + t * y for x, y in zip(Ur, Ui)]
            U[i] = [a_g * y - b_g * x for x, y in zip(Ur, Ui)]
        piv = A[r][c]
        if piv == 0:
            continue
        if piv < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
            piv = -piv
        for i in range(r):
            q = A[i][c] // piv
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return A, U


def hnf_full(rows, n: int, modulus: int | None = None) -> tuple[tuple[int, ...], ...]:
    """Canonical upper-triangular HNF of a full-rank lattice in ``Z^n``.

    With ``modulus`` D the result is the HNF of ``span(rows) + D*Z^n``; the
    caller must know that ``D*Z^n`` already lies in the lattice. Without a
    modulus the general algorithm is used and full rank is checked.
    """
    if modulus is None:
        H, _ = hnf(rows)
        H = H[:n]
        if len(H) < n or any(H[i][i] == 0 for i in range(n)):
            raise ValueError("generators do not span a full-rank lattice")
        return tuple(tuple(r) for r in H)
    return kernels.hnf_mod(rows, n, modulus)


def det(M) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n, cols = check_shape(M)
    if n != cols:
        raise ValueError("determinant of a non-square matrix")
    A = [list(map(int, r)) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            Ai, Ak = A[i], A[k]
            for j in range(k + 1, n):
                Ai[j] = (Ai[j] * akk - aik * Ak[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def _snf_core(M, want_transforms: bool):
    m, n = check_shape(M)
    A = [list(map(int, r)) for r in M]
    U = identity(m) if want_transforms else None
    V = identity(n) if want_transforms else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def row_comb(i, j, s, t, u, v):
        # (row i, row j) <- (s*ri + t*rj, u*ri + v*rj)
        ri, rj = A[i], A[j]
        A[i] = [s * x + t * y for x, y in zip(ri, rj)]
        A[j] = [u * x + v * y for x, y in zip(ri, rj)]
        if U is not None:
            ui, uj = U[i], U[j]
            U[i] = [s * x + t * y for x, y in zip(ui, uj)]
            U[j] = [u * x + v * y for x, y in zip(ui, uj)]

    def col_comb(i, j, s, t, u, v):
        for row in A:
            x, y = row[i], row[j]
            row[i], row[j] = s * x + t * y, u * x + v * y
        if V is not None:
            for row in V:
                x, y = row[i], row[j]
                row[i], row[j] = s * x + t * y, u * x + v * y

    k = 0
    while k < min(m, n):
        # bring a nonzero entry of smallest size to (k, k)
        best = None
        for i in range(k, m):
            for j in range(k, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(k, best[0])
        swap_cols(k, best[1])
        while True:
            done = True
            for i in range(k + 1, m):
                if A[i][k]:
                    a, b = A[k][k], A[i][k]
                    if b % a == 0:
                        row_comb(k, i, 1, 0, -(b // a), 1)
                    else:
                        g, s, t = xgcd(a, b)
                        row_comb(k, i, s, t, -b // g, a // g)
                        done = False
            for j in range(k + 1, n):
                if A[k][j]:
                    a, b = A[k][k], A[k][j]
                    if b % a == 0:
                        col_comb(k, j, 1, 0, -(b // a), 1)
                    else:
                        g, s, t = xgcd(a, b)
                        col_comb(k, j, s, t, -b // g, a // g)
                    done = False
            if done:
                # divisibility: fold any entry not divisible by the pivot into row k
                piv = A[k][k]
                bad = None
                for i in range(k + 1, m):
                    for j in range(k + 1, n):
                        if A[i][j] % piv:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                row_comb(k, bad, 1, 1, 0, 1)
        if A[k][k] < 0:
            A[k] = [-x for x in A[k]]
            if U is not None:
                U[k] = [-x for x in U[k]]
        k += 1
    divisors = [A[i][i] for i in range(min(m, n)) if A[i][i]]
    return divisors, A, U, V


def snf(M) -> list[int]:
    """Elementary divisors ``d_1 | d_2 | ...`` (nonzero ones only)."""
    divisors, _, _, _ = _snf_core(M, False)
    return divisors


def snf_with_transforms(M):
    """Return ``(D, U, V)`` with ``U*M*V == D`` diagonal in Smith form."""
    _, D, U, V = _snf_core(M, True)
    return D, U, V


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b if a and b else 0


def inverse_unimodular(U) -> list[list[int]]:
    """Exact inverse of a unimodular integer matrix."""
    n = len(U)
    aug = [list(U[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    H, _ = hnf(aug)
    for i in range(n):
        if H[i][i] != 1:
            raise ValueError("matrix is not unimodular")
    return [row[n:] for row in H]
