"""Univariate polynomials over F_p as coefficient lists (lowest degree first).

The zero polynomial is ``[]``; every other polynomial has a nonzero last entry.
"""

from __future__ import annotations

import random


def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def normalize(f, p):
    return trim([c % p for c in f])


def deg(f) -> int:
    return len(f) - 1


def add(f, g, p):
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p for i in range(n)])


def sub(f, g, p):
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)])


def mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return normalize(out, p)


def divmod_poly(f, g, p):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    inv = pow(g[-1], p - 2, p)
    dg = len(g) - 1
    q = [0] * max(len(f) - dg, 0)
    while len(f) - 1 >= dg and f:
        c = (f[-1] * inv) % p
        shift = len(f) - 1 - dg
        q[shift] = c
        for i, b in enumerate(g):
            f[shift + i] = (f[shift + i] - c * b) % p
        f = trim(f)
    return trim(q), f


def rem(f, g, p):
    return divmod_poly(f, g, p)[1]


def monic(f, p):
    if not f:
        return []
    inv = pow(f[-1], p - 2, p)
    return [(c * inv) % p for c in f]


def gcd(f, g, p):
    f, g = normalize(f, p), normalize(g, p)
    while g:
        f, g = g, rem(f, g, p)
    return monic(f, p)


def powmod(f, e: int, m, p):
    result = [1] if deg(m) > 0 else []
    base = rem(normalize(f, p), m, p)
    while e:
        if e & 1:
            result = rem(mul(result, base, p), m, p)
        e >>= 1
        if e:
            base = rem(mul(base, base, p), m, p)
    return result


def derivative(f, p):
    return normalize([i * f[i] for i in range(1, len(f))], p)


def evaluate(f, x, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f, p) -> bool:
    """Rabin's test via gcds with ``x^(p^k) - x``."""
    f = monic(normalize(f, p), p)
    n = deg(f)
    if n <= 0:
        return False
    if n == 1:
        return True
    x = [0, 1]
    if sub(powmod(x, p**n, f, p), x, p):
        return False
    for r in _prime_divisors(n):
        h = sub(powmod(x, p ** (n // r), f, p), x, p)
        if deg(gcd(h, f, p)) != 0:
            return False
    return True


def squarefree_factorization_monic(f, p):
    """Split a monic ``f`` into squarefree parts ``[(g, multiplicity), ...]``."""
    out = []
    i = 1
    f = monic(f, p)
    df = derivative(f, p)
    if not df:
        # f is a p-th power
        g = [f[k] for k in range(0, len(f), p)]
        return [(h, m * p) for h, m in squarefree_factorization_monic(g, p)]
    c = gcd(f, df, p)
    w = divmod_poly(f, c, p)[0]
    while deg(w) > 0:
        y = gcd(w, c, p)
        z = divmod_poly(w, y, p)[0]
        if deg(z) > 0:
            out.append((monic(z, p), i))
        i += 1
        w = y
        c = divmod_poly(c, y, p)[0]
    if deg(c) > 0:
        g = [c[k] for k in range(0, len(c), p)]
        out.extend((h, m * p) for h, m in squarefree_factorization_monic(g, p))
    return out


def distinct_degree(f, p):
    """Distinct-degree factorization of a squarefree monic ``f``."""
    out = []
    x = [0, 1]
    h = x
    d = 0
    f = list(f)
    while deg(f) >= 2 * (d + 1):
        d += 1
        h = powmod(h, p, f, p)
        g = gcd(sub(h, x, p), f, p)
        if deg(g) > 0:
            out.append((g, d))
            f = divmod_poly(f, g, p)[0]
            h = rem(h, f, p)
    if deg(f) > 0:
        out.append((monic(f, p), deg(f)))
    return out


def equal_degree(f, d, p, rng=None):
    """Cantor-Zassenhaus splitting of a product of degree-``d`` irreducibles."""
    n = deg(f)
    if n == d:
        return [monic(f, p)]
    rng = rng or random.Random(0x5EED)
    while True:
        a = trim([rng.randrange(p) for _ in range(n)])
        if deg(a) <= 0:
            continue
        if p == 2:
            # trace map a + a^2 + ... + a^(2^(d-1))
            t = a
            acc = a
            for _ in range(d - 1):
                t = rem(mul(t, t, p), f, p)
                acc = add(acc, t, p)
            g = gcd(acc, f, p)
        else:
            b = powmod(a, (p**d - 1) // 2, f, p)
            g = gcd(sub(b, [1], p), f, p)
        if 0 < deg(g) < n:
            return equal_degree(g, d, p, rng) + equal_degree(divmod_poly(f, g, p)[0], d, p, rng)


def factor(f, p):
    """Monic irreducible factors with multiplicities, sorted canonically."""
    f = normalize(f, p)
    if deg(f) <= 0:
        return []
    out = []
    for g, m in squarefree_factorization_monic(f, p):
        for h, d in distinct_degree(g, p):
            for irr in equal_degree(h, d, p):
                out.append((irr, m))
    out.sort(key=lambda t: (len(t[0]), t[0][::-1], t[1]))
    return out


def roots(f, p):
    return sorted((-g[0]) % p for g, _ in factor(f, p) if deg(g) == 1)
