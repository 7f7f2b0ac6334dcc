"""Stable subspaces and subgroups of finite modules.

A :class:`SubmoduleSearchSpace` is an F_p-vector space ``F_p^d`` with a list
of action matrices in row convention (``v -> v @ M``).  Submodules are
returned as RREF row tuples, which double as canonical keys.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

from sympy import factorint

from ..exactla import fpla, kernels, polyfp
from ..exactla.intmat import hnf, snf_with_transforms, inverse_unimodular

EXHAUSTIVE_LIMIT = 2**16


@dataclass
class SubmoduleSearchSpace:
    dim: int
    p: int
    actions: list
    commutative: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for M in self.actions:
            if len(M) != self.dim or any(len(r) != self.dim for r in M):
                raise ValueError("action matrix has the wrong shape")


class _Echelon:
    """Incrementally built echelon basis over F_p."""

    __slots__ = ("p", "rows")

    def __init__(self, p):
        self.p = p
        self.rows = {}  # pivot -> row with 1 at the pivot

    def reduce(self, v):
        p = self.p
        v = list(v)
        for piv, row in self.rows.items():
            c = v[piv]
            if c:
                v = [(a - c * b) % p for a, b in zip(v, row)]
        return v

    def add(self, v):
        """Insert ``v``; return the reduced vector if it was new, else ``None``."""
        v = self.reduce(v)
        for i, c in enumerate(v):
            if c:
                inv = pow(c, -1, self.p)
                v = [(x * inv) % self.p for x in v]
                # keep rows mutually reduced at the new pivot
                for piv, row in list(self.rows.items()):
                    d = row[i]
                    if d:
                        self.rows[piv] = [(a - d * b) % self.p for a, b in zip(row, v)]
                self.rows[i] = v
                return v
        return None

    def __len__(self):
        return len(self.rows)

    def key(self):
        return tuple(tuple(self.rows[k]) for k in sorted(self.rows))


def spin_subspace(vecs, actions, p: int, dim: int):
    """Smallest subspace containing ``vecs`` and stable under ``actions`` (RREF key)."""
    E = _Echelon(p)
    queue = []
    for v in vecs:
        r = E.add(v)
        if r is not None:
            queue.append(r)
    while queue:
        v = queue.pop()
        for M in actions:
            w = fpla.vec_mat(v, M, p)
            r = E.add(w)
            if r is not None:
                queue.append(r)
                if len(E) == dim:
                    return E.key()
    return E.key()


def _projective_points(d: int, p: int):
    for lead in range(d):
        for tail in itertools.product(range(p), repeat=d - lead - 1):
            v = [0] * lead + [1] + list(tail)
            yield v


def _contains(big, small, p):
    piv = [next(i for i, x in enumerate(r) if x) for r in big]
    return all(not any(kernels.reduce_mod(list(v), [list(r) for r in big], piv, p)) for v in small)


def _minimal_keys(keys, p):
    keys = sorted(set(keys), key=len)
    out = []
    for k in keys:
        if not any(len(m) < len(k) and _contains(k, m, p) for m in out):
            out.append(k)
    return out


def minimal_stable_submodules(S: SubmoduleSearchSpace) -> list:
    """All minimal nonzero stable subspaces of ``S``."""
    d, p = S.dim, S.p
    if d == 0:
        return []
    if p**d <= EXHAUSTIVE_LIMIT:
        return _minimal_exhaustive(S)
    if S.commutative:
        return _minimal_socle(S)
    warnings.warn(
        f"exhaustive submodule search over {p}^{d} vectors; this may be slow",
        RuntimeWarning,
        stacklevel=2,
    )
    return _minimal_exhaustive(S)


def _minimal_exhaustive(S: SubmoduleSearchSpace):
    d, p = S.dim, S.p
    seen = set()
    for v in _projective_points(d, p):
        seen.add(spin_subspace([v], S.actions, p, d))
    return _minimal_keys(seen, p)


# -- socle method for commutative actions ---------------------------------


def _mat_key(M):
    return [x for r in M for x in r]


def _minimal_socle(S: SubmoduleSearchSpace):
    """Minimal submodules via the socle for a commutative action algebra."""
    d, p = S.dim, S.p
    ident = fpla.identity(d)
    # action algebra E = span of all products of generators (commutative)
    E = _Echelon(p)
    basis = []
    queue = [ident] + [list(map(list, M)) for M in S.actions]
    while queue:
        M = queue.pop()
        r = E.add(_mat_key(M))
        if r is None:
            continue
        basis.append(M)
        for G in S.actions:
            queue.append(fpla.mat_mul(M, G, p))
    e = p
    while e < d:
        e *= p
    # Frobenius kernel = radical of E
    imgs = [_mat_key(_mat_power(M, e, p)) for M in basis]
    ker = fpla.left_kernel(imgs, len(basis), d * d, p)
    rad = [_combine(k, basis, p) for k in ker]
    # socle: common kernel of the radical
    if rad:
        stacked = [[] for _ in range(d)]
        for R in rad:
            for i in range(d):
                stacked[i].extend(R[i])
        soc = fpla.left_kernel(stacked, d, d * len(rad), p)
    else:
        soc = fpla.identity(d)
    # idempotents of E/rad acting on the socle
    soc_space = fpla.rref(soc, d, p)
    comps = _split_on(soc_space, basis, p, d)
    results = []
    for U, alpha, f in comps:
        results.extend(_field_lines(U, alpha, f, p, d))
    return sorted(set(results))


def _mat_power(M, e, p):
    R = None
    B = M
    while e:
        if e & 1:
            R = B if R is None else fpla.mat_mul(R, B, p)
        e >>= 1
        if e:
            B = fpla.mat_mul(B, B, p)
    return R


def _combine(coeffs, mats, p):
    d = len(mats[0])
    out = [[0] * d for _ in range(d)]
    for c, M in zip(coeffs, mats):
        if c:
            for i in range(d):
                oi, Mi = out[i], M[i]
                for j in range(d):
                    oi[j] = (oi[j] + c * Mi[j]) % p
    return out


def _restrict(M, space, p):
    """Matrix of ``M`` restricted to an invariant subspace (in RREF coordinates)."""
    R = space[0]
    return [fpla.coordinates(fpla.vec_mat(r, M, p), space, p) for r in R]


def _split_on(space, basis, p, d):
    """Decompose the socle into homogeneous components ``(U, alpha, f)``.

    ``U`` is an RREF subspace on which the action factors through a field
    F_{p^f}; ``alpha`` is a d x d matrix generating that field on ``U``.
    The action algebra is semisimple on the socle, so a component is a field
    exactly when some element has an irreducible minimal polynomial whose
    degree equals the dimension of the restricted algebra.
    """
    pending = [space]
    done = []
    while pending:
        U = pending.pop()
        m = len(U[0])
        if m == 0:
            continue
        restricted = []
        E = _Echelon(p)
        for M in basis:
            Mr = _restrict(M, U, p)
            if E.add(_mat_key(Mr)) is not None:
                restricted.append((M, Mr))
        dim_e = len(restricted)
        piece = None
        for M, Mr in restricted:
            poly = _minpoly(Mr, p)
            facs = polyfp.factor(poly, p)
            if len(facs) > 1:
                piece = (Mr, facs)
                break
            if polyfp.deg(poly) == dim_e:
                done.append((U, M, dim_e))
                break
        else:
            # no single generator decides it: split with a Berlekamp element
            piece = _berlekamp_piece([Mr for _, Mr in restricted], p, m)
            if piece is None:  # pragma: no cover - semisimplicity guarantees a split
                raise ArithmeticError("could not decompose the socle")
        if piece is not None:
            Mr, facs = piece
            for g, _ in facs:
                ker = fpla.left_kernel(_poly_at(g, Mr, p), m, m, p)
                vecs = [fpla.vec_mat(k, U[0], p) for k in ker]
                pending.append(fpla.rref(vecs, d, p))
    return done


def _berlekamp_piece(mats, p, m):
    """A non-scalar ``b`` with ``b^p = b`` in the span of ``mats`` and its factors."""
    rows = [_mat_key(_mat_power(M, p, p)) for M in mats]
    diffs = [[(a - b) % p for a, b in zip(r, _mat_key(M))] for r, M in zip(rows, mats)]
    ker = fpla.left_kernel(diffs, len(mats), m * m, p)
    for k in ker:
        B = _combine(k, mats, p)
        poly = _minpoly(B, p)
        if polyfp.deg(poly) > 1:
            return B, polyfp.factor(poly, p)
    return None


def _minpoly(M, p):
    """Minimal polynomial of a square matrix over F_p (low degree first)."""
    m = len(M)
    rows = []
    cur = fpla.identity(m)
    while True:
        vec = _mat_key(cur)
        sol = _solve(rows, vec, p)
        if sol is not None:
            return [(-c) % p for c in sol] + [1]
        rows.append(vec)
        cur = fpla.mat_mul(cur, M, p)


def _solve(rows, target, p):
    """Coefficients ``c`` with ``sum c_i rows_i == target``, or ``None``."""
    if not any(target):
        return [0] * len(rows)
    if not rows:
        return None
    M = [list(r) for r in rows] + [[(-x) % p for x in target]]
    ker = fpla.left_kernel(M, len(M), len(target), p)
    for kv in ker:
        if kv[-1]:
            inv = pow(kv[-1], -1, p)
            return [(c * inv) % p for c in kv[:-1]]
    return None


def _poly_at(g, M, p):
    m = len(M)
    R = [[0] * m for _ in range(m)]
    P = fpla.identity(m)
    for c in g:
        if c:
            R = fpla.mat_add(R, fpla.mat_scale(P, c, p), p)
        P = fpla.mat_mul(P, M, p)
    return R


def _field_lines(U, alpha, f, p, d):
    """All F_{p^f}-lines of ``U``, where ``alpha`` generates the field action."""
    vecs = [list(r) for r in U[0]]
    E = _Echelon(p)
    fbasis = []
    for v in vecs:
        if E.reduce(v) == [0] * d:
            continue
        fbasis.append(v)
        w = v
        for _ in range(f):
            E.add(w)
            w = fpla.vec_mat(w, alpha, p)
    out = []
    m = len(fbasis)
    orbit = [[_pow_apply(b, alpha, k, p) for k in range(f)] for b in fbasis]
    for j in range(m):
        tail = [v for i in range(j + 1, m) for v in orbit[i]]
        for coeffs in itertools.product(range(p), repeat=len(tail)):
            x = list(fbasis[j])
            for c, v in zip(coeffs, tail):
                if c:
                    x = [(a + c * b) % p for a, b in zip(x, v)]
            line = [_pow_apply(x, alpha, k, p) for k in range(f)]
            out.append(tuple(tuple(r) for r in fpla.rref(line, d, p)[0]))
    return out


def _pow_apply(v, M, k, p):
    for _ in range(k):
        v = fpla.vec_mat(v, M, p)
    return v


# -- all submodules of a finite abelian group --------------------------------


def _int_hnf_mod(rows, k, D):
    return kernels.hnf_mod([list(r) for r in rows], k, D)


def _intersect_int(B1, B2, k):
    M = [list(r) + list(r) for r in B1] + [list(r) + [0] * k for r in B2]
    H, _ = hnf(M)
    return [row[k:] for row in H[k : 2 * k]]


def all_stable_subgroups(divisors, actions, primes=None) -> list:
    """All subgroups of ``Z^k / diag(divisors)`` stable under integer ``actions``.

    Subgroups are returned as HNF tuples of their preimages in ``Z^k``.  The
    search ascends by minimal submodules of successive quotients, separately
    for each prime, and combines the primary parts by sums.
    """
    k = len(divisors)
    if k == 0:
        return [()]
    D = 1
    for d in divisors:
        D = D * d // _gcd(D, d)
    R = [[divisors[i] if i == j else 0 for j in range(k)] for i in range(k)]
    base = _int_hnf_mod(R, k, D)
    order = 1
    for d in divisors:
        order *= d
    if order == 1:
        return [base]
    plist = primes or sorted(factorint(order))
    parts = []
    for p in plist:
        parts.append(_p_subgroups(base, k, D, p, actions))
    out = []
    for combo in itertools.product(*parts):
        rows = [list(r) for H in combo for r in H]
        out.append(_int_hnf_mod(rows, k, D))
    return sorted(set(out))


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _p_subgroups(base, k, D, p, actions):
    pk = [[p if i == j else 0 for j in range(k)] for i in range(k)]
    seen = {base}
    queue = [base]
    while queue:
        U = queue.pop()
        # X = {x : p x in U}
        pX = _intersect_int(U, pk, k)
        X = [[x // p for x in r] for r in pX]
        C = []
        for r in U:
            c = kernels.solve_upper(X, list(r))
            C.append(c)
        Dm, _, V = snf_with_transforms(C)
        Vinv = inverse_unimodular(V)
        gens_all = _mul(Vinv, X)
        idx = [i for i in range(k) if Dm[i][i] == p]
        if not idx:
            continue
        gens = [gens_all[i] for i in idx]
        mats = []
        for A in actions:
            M = []
            for g in gens:
                c = kernels.solve_upper(X, _vecmat_int(g, A))
                if c is None:
                    raise ValueError("subgroup lattice is not stable under the action")
                cv = [sum(ci * V[j][t] for j, ci in enumerate(c)) for t in range(k)]
                M.append([cv[t] % p for t in idx])
            mats.append(M)
        S = SubmoduleSearchSpace(len(idx), p, mats)
        for sub in minimal_stable_submodules(S):
            lifts = []
            for row in sub:
                v = [0] * k
                for c, g in zip(row, gens):
                    if c:
                        v = [a + c * b for a, b in zip(v, g)]
                lifts.append(v)
            U2 = _int_hnf_mod([list(r) for r in U] + lifts, k, D)
            if U2 not in seen:
                seen.add(U2)
                queue.append(U2)
    return sorted(seen)


def _vecmat_int(v, A):
    n = len(A[0])
    out = [0] * n
    for i, c in enumerate(v):
        if c:
            Ai = A[i]
            for j in range(n):
                out[j] += c * Ai[j]
    return out


def _mul(A, B):
    Bt = list(zip(*B))
    return [[sum(x * y for x, y in zip(r, c)) for c in Bt] for r in A]


def all_stable_submodules(S, actions=None) -> list:
    """All stable submodules of a search space or a quotient module.

    For a :class:`SubmoduleSearchSpace` the result is a list of RREF keys; for
    a :class:`~overorders.order.QuotientModule` it is a list of HNF keys of
    subgroup preimages in generator coordinates (see :func:`all_stable_subgroups`).
    """
    if isinstance(S, SubmoduleSearchSpace):
        subs = all_stable_subgroups([S.p] * S.dim, S.actions)
        out = []
        for H in subs:
            rows = [[x % S.p for x in r] for r in H if any(x % S.p for x in r)]
            out.append(tuple(tuple(r) for r in fpla.rref(rows, S.dim, S.p)[0]))
        return sorted(set(out), key=lambda t: (len(t), t))
    Q = S
    if actions is None:
        actions = [_to_int_action(M) for M in (Q.left + Q.right)]
    return all_stable_subgroups(list(Q.divisors), actions)


def _to_int_action(M):
    return [list(r) for r in M]
