"""Pure-Python versions of the hot kernels.

The compiled module ``_kernels`` exports the same functions with the same
semantics; ``kernels`` picks one at import time.
"""

from __future__ import annotations


def _xgcd(a, b):
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def hnf_mod(rows, n, D):
    """HNF of ``span(rows) + D*Z^n`` as a tuple of ``n`` row tuples."""
    B = [[0] * n for _ in range(n)]
    for j in range(n):
        B[j][j] = D
    for row in rows:
        r = [x % D for x in row]
        for j in range(n):
            b = r[j]
            if not b:
                continue
            piv = B[j]
            a = piv[j]
            if b % a == 0:
                q = b // a
                for k in range(j, n):
                    r[k] = (r[k] - q * piv[k]) % D
                continue
            g, s, t = _xgcd(a, b)
            ag, bg = a // g, b // g
            new = [0] * n
            new[j] = g
            for k in range(j + 1, n):
                x, y = piv[k], r[k]
                new[k] = (s * x + t * y) % D
                r[k] = (ag * y - bg * x) % D
            r[j] = 0
            B[j] = new
    for j in range(n):
        pj = B[j][j]
        Bj = B[j]
        for i in range(j):
            Bi = B[i]
            q = Bi[j] // pj
            if q:
                for k in range(j, n):
                    Bi[k] -= q * Bj[k]
    return tuple(tuple(r) for r in B)


def rref_mod(rows, ncols, p):
    """Reduced row echelon form over F_p: ``(basis_rows, pivot_columns)``."""
    R = []
    pivots = []
    for row in rows:
        v = [x % p for x in row]
        for r, c in zip(R, pivots):
            a = v[c]
            if a:
                for k in range(c, ncols):
                    v[k] = (v[k] - a * r[k]) % p
        c = next((k for k in range(ncols) if v[k]), None)
        if c is None:
            continue
        inv = pow(v[c], p - 2, p) if p > 2 else 1
        if inv != 1:
            v = [(x * inv) % p for x in v]
        for r in R:
            a = r[c]
            if a:
                for k in range(c, ncols):
                    r[k] = (r[k] - a * v[k]) % p
        # keep pivots sorted
        pos = 0
        while pos < len(pivots) and pivots[pos] < c:
            pos += 1
        R.insert(pos, v)
        pivots.insert(pos, c)
    return R, pivots


def reduce_mod(vec, R, pivots, p):
    """Reduce ``vec`` modulo the row space given in RREF."""
    v = [x % p for x in vec]
    for r, c in zip(R, pivots):
        a = v[c]
        if a:
            v = [(x - a * y) % p for x, y in zip(v, r)]
    return v


def solve_upper(H, v):
    """Integer ``x`` with ``x*H == v`` for upper-triangular ``H``, or ``None``."""
    n = len(H)
    x = [0] * n
    w = list(v)
    for j in range(n):
        hj = H[j]
        piv = hj[j]
        q, rem = divmod(w[j], piv)
        if rem:
            return None
        x[j] = q
        if q:
            for k in range(j + 1, n):
                w[k] -= q * hj[k]
    return x


def mul_mod(a, b, table, N):
    """Product of coordinate vectors under integer structure constants mod N.

    ``table[i][j]`` is a sparse list of ``(k, c)`` pairs.
    """
    n = len(a)
    out = [0] * n
    for i in range(n):
        ai = a[i]
        if not ai:
            continue
        Ti = table[i]
        for j in range(n):
            bj = b[j]
            if not bj:
                continue
            c = ai * bj
            for k, t in Ti[j]:
                out[k] += c * t
    if N:
        return [x % N for x in out]
    return out
