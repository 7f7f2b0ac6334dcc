"""Linear algebra over a prime field F_p on lists of ints.

Subspaces are kept as ``(rref_rows, pivots)`` pairs; the tuple of RREF rows
doubles as a canonical key.
"""

from __future__ import annotations

from .kernels import reduce_mod, rref_mod


def rref(rows, ncols: int, p: int):
    return rref_mod(rows, ncols, p)


def rank(rows, ncols: int, p: int) -> int:
    return len(rref_mod(rows, ncols, p)[1])


def kernel(M, ncols: int, p: int) -> list[list[int]]:
    """Basis of ``{v : M v = 0}`` for ``M`` given by rows."""
    R, pivots = rref_mod(M, ncols, p)
    piv_set = set(pivots)
    basis = []
    for fc in range(ncols):
        if fc in piv_set:
            continue
        v = [0] * ncols
        v[fc] = 1
        for row, pc in zip(R, pivots):
            if row[fc]:
                v[pc] = (-row[fc]) % p
        basis.append(v)
    return basis


def left_kernel(M, nrows: int, ncols: int, p: int) -> list[list[int]]:
    """Basis of ``{v : v M = 0}``."""
    if ncols == 0:
        return [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    Mt = [[M[i][j] for i in range(nrows)] for j in range(ncols)]
    return kernel(Mt, nrows, p)


def reduce(vec, space, p: int):
    R, pivots = space
    return reduce_mod(vec, R, pivots, p)


def in_span(vec, space, p: int) -> bool:
    return not any(reduce(vec, space, p))


def span(rows, ncols: int, p: int):
    return rref_mod(rows, ncols, p)


def span_key(space) -> tuple:
    return tuple(tuple(r) for r in space[0])


def is_subspace(small, big, p: int) -> bool:
    return all(in_span(r, big, p) for r in small[0])


def coordinates(vec, space, p: int):
    """Coordinates of ``vec`` with respect to the RREF basis, or ``None``."""
    R, pivots = space
    coeffs = [vec[c] % p for c in pivots]
    # RREF rows have identity columns at the pivots, so the pivot entries are the coordinates
    v = [x % p for x in vec]
    for a, r in zip(coeffs, R):
        if a:
            v = [(x - a * y) % p for x, y in zip(v, r)]
    if any(v):
        return None
    return coeffs


def mat_vec(M, v, p: int):
    """``M v`` for ``M`` given by rows."""
    return [sum(a * b for a, b in zip(r, v)) % p for r in M]


def vec_mat(v, M, p: int):
    """``v M`` for ``M`` given by rows."""
    n = len(M[0]) if M else 0
    out = [0] * n
    for a, r in zip(v, M):
        if a:
            for k in range(n):
                out[k] += a * r[k]
    return [x % p for x in out]


def mat_mul(A, B, p: int):
    return [vec_mat(r, B, p) for r in A]


def identity(n: int):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_add(A, B, p: int):
    return [[(x + y) % p for x, y in zip(r, s)] for r, s in zip(A, B)]


def mat_scale(A, c: int, p: int):
    return [[(c * x) % p for x in r] for r in A]


def intersect(U, V, n: int, p: int):
    """Intersection of two subspaces given in RREF."""
    A, B = U[0], V[0]
    if not A or not B:
        return [], []
    # v = a U = b V  <=>  (a, b) [U; -V] = 0
    M = [list(r) for r in A] + [[(-x) % p for x in r] for r in B]
    ker = left_kernel(M, len(M), n, p)
    vecs = [vec_mat(k[: len(A)], A, p) for k in ker]
    return rref_mod(vecs, n, p)


def inverse(M, p: int):
    n = len(M)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(M)]
    R, pivots = rref_mod(aug, 2 * n, p)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise ZeroDivisionError("singular matrix over F_p")
    return [r[n:] for r in R[:n]]
