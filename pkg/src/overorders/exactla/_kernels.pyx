# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; same API as ``_kernels_py``.

Moduli below 2^31 run on C ``long long`` arrays (every product of two
reduced residues fits in 62 bits).  Larger moduli, and the unbounded
``solve_upper``, use Python integers with typed loops.
"""

from libc.stdlib cimport malloc, free

from . import _kernels_py

cdef long long SMALL = 1 << 31
# hnf_mod keeps every entry in [0, D) and forms products of two such entries
cdef long long SMALL_HNF = 1 << 28


cdef inline long long _mod(long long a, long long m) nogil:
    a %= m
    return a + m if a < 0 else a


cdef inline long long _floordiv(long long a, long long b) nogil:
    cdef long long q = a // b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef inline long long _inv(long long a, long long p) nogil:
    # a^(p-2) mod p for prime p
    cdef long long r = 1, e = p - 2
    a = _mod(a, p)
    while e > 0:
        if e & 1:
            r = (r * a) % p
        a = (a * a) % p
        e >>= 1
    return r


cdef inline void _xgcd(long long a, long long b, long long *g, long long *s, long long *t) nogil:
    cdef long long s0 = 1, s1 = 0, t0 = 0, t1 = 1, q, r, tmp
    while b != 0:
        q = a // b
        r = a - q * b
        a = b
        b = r
        tmp = s0 - q * s1
        s0 = s1
        s1 = tmp
        tmp = t0 - q * t1
        t0 = t1
        t1 = tmp
    if a < 0:
        g[0] = -a
        s[0] = -s0
        t[0] = -t0
    else:
        g[0] = a
        s[0] = s0
        t[0] = t0


def hnf_mod(rows, int n, D):
    """HNF of ``span(rows) + D*Z^n`` as a tuple of ``n`` row tuples."""
    if D >= SMALL_HNF or D <= 0 or n > 64:
        return _kernels_py.hnf_mod(rows, n, D)
    cdef long long d = D
    cdef long long *B = <long long *> malloc(n * n * sizeof(long long))
    cdef long long *r = <long long *> malloc(n * sizeof(long long))
    cdef long long *new = <long long *> malloc(n * sizeof(long long))
    cdef int i, j, k
    cdef long long a, b, q, g, s, t, ag, bg, x, y, pj
    try:
        for i in range(n * n):
            B[i] = 0
        for j in range(n):
            B[j * n + j] = d
        for row in rows:
            for k in range(n):
                r[k] = row[k] % D
            for j in range(n):
                b = r[j]
                if b == 0:
                    continue
                a = B[j * n + j]
                if b % a == 0:
                    q = b // a
                    for k in range(j, n):
                        r[k] = _mod(r[k] - _mod(q * B[j * n + k], d), d)
                    continue
                _xgcd(a, b, &g, &s, &t)
                ag = a // g
                bg = b // g
                for k in range(n):
                    new[k] = 0
                new[j] = g
                for k in range(j + 1, n):
                    x = B[j * n + k]
                    y = r[k]
                    new[k] = _mod(_mod(s, d) * x + _mod(t, d) * y, d)
                    r[k] = _mod(ag * y - bg * x, d)
                r[j] = 0
                for k in range(n):
                    B[j * n + k] = new[k]
        # Back substitution.  D*e_k is a combination of rows k..n-1, so entries
        # right of the current column may be reduced mod D; without that they
        # grow like D^k and overflow.
        for j in range(n):
            pj = B[j * n + j]
            for i in range(j):
                q = _floordiv(B[i * n + j], pj)
                if q:
                    B[i * n + j] -= q * pj
                    for k in range(j + 1, n):
                        B[i * n + k] = _mod(B[i * n + k] - _mod(q * B[j * n + k], d), d)
        return tuple(tuple(B[i * n + k] for k in range(n)) for i in range(n))
    finally:
        free(B)
        free(r)
        free(new)


def rref_mod(rows, int ncols, p):
    """Reduced row echelon form over F_p: ``(basis_rows, pivot_columns)``."""
    if p >= SMALL:
        return _kernels_py.rref_mod(rows, ncols, p)
    cdef long long pp = p
    rows = list(rows)
    cdef int m = len(rows)
    cdef int cap = m if m < ncols else ncols
    cdef long long *R = <long long *> malloc((cap + 1) * ncols * sizeof(long long))
    cdef int *piv = <int *> malloc((cap + 1) * sizeof(int))
    cdef long long *v = <long long *> malloc(ncols * sizeof(long long))
    cdef int nr = 0, i, k, c, pos
    cdef long long a, inv
    try:
        for row in rows:
            for k in range(ncols):
                v[k] = row[k] % p
            for i in range(nr):
                c = piv[i]
                a = v[c]
                if a:
                    for k in range(c, ncols):
                        v[k] = _mod(v[k] - a * R[i * ncols + k], pp)
            c = -1
            for k in range(ncols):
                if v[k]:
                    c = k
                    break
            if c < 0:
                continue
            if v[c] != 1:
                inv = _inv(v[c], pp)
                for k in range(c, ncols):
                    v[k] = (v[k] * inv) % pp
            for i in range(nr):
                a = R[i * ncols + c]
                if a:
                    for k in range(c, ncols):
                        R[i * ncols + k] = _mod(R[i * ncols + k] - a * v[k], pp)
            pos = 0
            while pos < nr and piv[pos] < c:
                pos += 1
            i = nr
            while i > pos:
                piv[i] = piv[i - 1]
                for k in range(ncols):
                    R[i * ncols + k] = R[(i - 1) * ncols + k]
                i -= 1
            piv[pos] = c
            for k in range(ncols):
                R[pos * ncols + k] = v[k]
            nr += 1
            if nr == ncols:
                break
        return [[R[i * ncols + k] for k in range(ncols)] for i in range(nr)], [piv[i] for i in range(nr)]
    finally:
        free(R)
        free(piv)
        free(v)


def reduce_mod(vec, R, pivots, p):
    """Reduce ``vec`` modulo the row space given in RREF."""
    if p >= SMALL:
        return _kernels_py.reduce_mod(vec, R, pivots, p)
    cdef long long pp = p
    cdef int n = len(vec), k, c
    cdef long long a
    cdef long long *v = <long long *> malloc(n * sizeof(long long))
    try:
        for k in range(n):
            v[k] = vec[k] % p
        for r, cc in zip(R, pivots):
            c = cc
            a = v[c]
            if a:
                for k in range(n):
                    v[k] = _mod(v[k] - a * <long long> r[k], pp)
        return [v[k] for k in range(n)]
    finally:
        free(v)


def solve_upper(H, v):
    """Integer ``x`` with ``x*H == v`` for upper-triangular ``H``, or ``None``."""
    cdef int n = len(H), j, k
    cdef list x = [0] * n
    cdef list w = list(v)
    cdef tuple hj
    for j in range(n):
        hj = tuple(H[j])
        q, rem = divmod(w[j], hj[j])
        if rem:
            return None
        x[j] = q
        if q:
            for k in range(j + 1, n):
                if hj[k]:
                    w[k] = w[k] - q * hj[k]
    return x


def mul_mod(a, b, table, N):
    """Product of coordinate vectors under integer structure constants mod N."""
    if not N or N >= SMALL:
        return _kernels_py.mul_mod(a, b, table, N)
    cdef long long nn = N
    cdef int n = len(a), i, j, kk
    cdef long long ai, bj, c, t
    cdef long long *out = <long long *> malloc(n * sizeof(long long))
    cdef long long *av = <long long *> malloc(n * sizeof(long long))
    cdef long long *bv = <long long *> malloc(n * sizeof(long long))
    try:
        for i in range(n):
            out[i] = 0
            av[i] = a[i] % N
            bv[i] = b[i] % N
        for i in range(n):
            ai = av[i]
            if ai == 0:
                continue
            Ti = table[i]
            for j in range(n):
                bj = bv[j]
                if bj == 0:
                    continue
                c = (ai * bj) % nn
                for kk_t in Ti[j]:
                    kk = kk_t[0]
                    t = kk_t[1] % N
                    out[kk] = (out[kk] + c * t) % nn
        return [out[i] for i in range(n)]
    finally:
        free(out)
        free(av)
        free(bv)
