"""Prime-by-prime overorder enumeration for commutative orders.

All p-overorders of a base order lie between the base and its p-maximal
overorder O.  Working in the Z-basis of O, every such order is an integer
HNF containing ``p^k * Z^n`` (where ``p^k O`` lies in the base), so orders
are tuples of small integers and all products are taken modulo a power of p.

Prime ideals of an intermediate order G are contractions of the primes of O;
a prime Q of G is identified with the set of O-primes lying over it, so
"Q lies over P" is just set inclusion.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from math import prod

from sympy import primerange

from ..exactla import fpla, kernels
from ..exactla.intmat import snf
from ..order import Lattice, Order, transition_matrix
from ..primes import PrimeIdeal, p_maximal_overorder, prime_ideals_over
from .poset import Branch

PRUNE_FIELD_LIMIT = 256


class NonCommutativeError(ValueError):
    pass


@dataclass
class LocalPrime:
    S: frozenset  # indices of the O-primes lying over this prime
    H: tuple  # HNF in O-coordinates (contains p^(k+1) Z^n)
    f: int  # residue degree
    K: tuple  # RREF of Q/pG in G-coordinates


@dataclass
class BranchStats:
    lines: int = 0  # lines examined
    eigenlines: int = 0  # lines in eigenspaces of phi_q
    e2: int = 0  # lines that passed every filter but failed the x^2 test
    extension_spins: int = 0  # lines spun as candidates for residue field extensions
    spun: int = 0  # total spins (each spin of a non-order line)
    bass_nodes: int = 0
    gorenstein_nodes: int = 0


class LocalContext:
    """Everything needed to enumerate p-overorders of ``base``."""

    def __init__(self, base: Order, p: int, prune: bool = True):
        if not base.algebra.commutative:
            raise NonCommutativeError("the local engine needs a commutative order")
        self.base = base
        self.p = p
        self.prune = prune
        self.O = O = p_maximal_overorder(base, p)
        self.n = n = base.dim
        T = transition_matrix(O.lattice, base.lattice)
        top = snf(T)[-1]
        k = 0
        while top % p == 0:
            top //= p
            k += 1
        self.k = k
        self.M = p**k
        self.M1 = p ** (k + 1)
        self.N = p ** (k + 2)
        self.table, one = O.structure_constants()
        self.one = list(one)
        self.H0 = kernels.hnf_mod(T, n, self.M)
        self.oprimes = prime_ideals_over(O, p)
        self.ospaces = [P.space for P in self.oprimes]
        self._lock = threading.RLock()
        self._primes = {}
        self._colon = {}
        self._min = {}
        self._pover = {}
        self._gor = {}
        self._bass = {}
        self.stats = {}
        self._label = None

    # -- arithmetic in O ---------------------------------------------------
    def mul(self, a, b):
        return kernels.mul_mod(a, b, self.table, self.N)

    def power(self, a, e):
        r = self.one
        b = a
        while e:
            if e & 1:
                r = self.mul(r, b)
            e >>= 1
            if e:
                b = self.mul(b, b)
        return r

    def elem(self, t, H):
        """The element ``sum t_i H_i`` (exact)."""
        n = self.n
        out = [0] * n
        for c, row in zip(t, H):
            if c:
                for j in range(n):
                    if row[j]:
                        out[j] += c * row[j]
        return out

    def frac_elem(self, t, H):
        """``(sum t_i H_i)/p``; the sum must lie in ``p*O``."""
        y = self.elem(t, H)
        p = self.p
        if any(v % p for v in y):
            raise ArithmeticError("element is not integral at p")  # pragma: no cover
        return [v // p for v in y]

    def tcoords_int(self, H, y):
        """Coordinates mod p of ``y`` (in G) in the basis ``H``."""
        c = kernels.solve_upper(H, [v % self.N for v in y])
        return [v % self.p for v in c]

    def tcoords_frac(self, H, x):
        """Coordinates mod p of ``p*x`` in ``H`` for ``x`` in ``p^-1 G``."""
        p, N = self.p, self.N
        c = kernels.solve_upper(H, [(p * v) % N for v in x])
        return [v % p for v in c]

    def order_hnf(self, rows):
        return kernels.hnf_mod([list(r) for r in rows], self.n, self.M)

    def contains(self, big, small):
        return all(kernels.solve_upper(big, list(r)) is not None for r in small)

    # -- conversions -------------------------------------------------------
    def to_lattice(self, H) -> Lattice:
        B = self.O.hnf
        n = self.n
        rows = [[sum(r[i] * B[i][j] for i in range(n) if r[i]) for j in range(n)] for r in H]
        modulus = self.M1 * prod(B[i][i] for i in range(n))
        return Lattice.from_int_rows(self.base.algebra, rows, self.O.den, modulus)

    def from_lattice(self, L: Lattice):
        return self.order_hnf(transition_matrix(self.O.lattice, L))

    # -- primes --------------------------------------------------------------
    def primes_of(self, H):
        with self._lock:
            got = self._primes.get(H)
        if got is not None:
            return got
        p, n = self.p, self.n
        groups = {}
        for j, (R, piv) in enumerate(self.ospaces):
            pset = set(piv)
            nonpiv = [c for c in range(n) if c not in pset]
            imgs = []
            for row in H:
                r = kernels.reduce_mod([v % p for v in row], [list(x) for x in R], list(piv), p)
                imgs.append([r[c] for c in nonpiv])
            ker = fpla.left_kernel(imgs, n, len(nonpiv), p)
            K = fpla.rref(ker, n, p)
            key = tuple(tuple(r) for r in K[0])
            groups.setdefault(key, (K, []))[1].append(j)
        out = []
        for key, (K, js) in groups.items():
            rows = [self.elem(t, H) for t in K[0]] + [[p * v for v in row] for row in H]
            HQ = kernels.hnf_mod(rows, n, self.M1)
            out.append(LocalPrime(frozenset(js), HQ, n - len(K[0]), (key, tuple(K[1]))))
        out.sort(key=lambda Q: (Q.f, Q.H))
        with self._lock:
            self._primes[H] = out
        return out

    def prime_with(self, H, S):
        for Q in self.primes_of(H):
            if Q.S == S:
                return Q
        raise KeyError("no prime with that support")  # pragma: no cover

    def match_prime(self, P: PrimeIdeal) -> frozenset:
        """Support of a prime ideal of the base order."""
        for Q in self.primes_of(self.H0):
            if self.to_lattice(Q.H) == P.lattice:
                return Q.S
        raise ValueError("prime ideal does not belong to the base order")

    # -- colon quotients -------------------------------------------------------
    def multiplier_space(self, H, Q: LocalPrime):
        """RREF (in G-coordinates) of ``(Q:Q)/G``."""
        key = (H, Q.S)
        with self._lock:
            got = self._colon.get(key)
        if got is not None:
            return got
        p, n = self.p, self.n
        HQ = Q.H
        rows = []
        for g in H:
            row = []
            for pi in HQ:
                c = kernels.solve_upper(HQ, self.mul(g, pi))
                row.extend(v % p for v in c)
            rows.append(row)
        ker = fpla.left_kernel(rows, n, n * n, p)
        W = fpla.rref(ker, n, p)
        with self._lock:
            self._colon[key] = W
        return W

    def is_gorenstein(self, H, Q: LocalPrime) -> bool:
        key = (H, Q.S)
        got = self._gor.get(key)
        if got is not None:
            return got
        p, n = self.p, self.n
        rows = []
        for g in H:
            row = []
            for pi in Q.H:
                c = kernels.solve_upper(H, self.mul(g, pi))
                row.extend(v % p for v in c)
            rows.append(row)
        dim = len(fpla.left_kernel(rows, n, n * n, p))
        res = dim == Q.f
        self._gor[key] = res
        return res

    def is_bass(self, H, Q: LocalPrime) -> bool:
        key = (H, Q.S)
        got = self._bass.get(key)
        if got is not None:
            return got
        p, n = self.p, self.n
        vecs = []
        for pi in Q.H:
            for i in range(n):
                e = [0] * n
                e[i] = 1
                vecs.append([v % p for v in self.mul(pi, e)])
        r = fpla.rank(vecs, n, p)
        res = n - r <= 2 * Q.f
        self._bass[key] = res
        return res

    # -- minimal overorders ------------------------------------------------------
    def _stat(self) -> BranchStats:
        return self.stats.setdefault(self._label, BranchStats())

    def minimal_at(self, H, Q: LocalPrime, bass: bool = False):
        """Minimal overorders of ``H`` with conductor ``Q`` (HNF keys, sorted)."""
        key = (H, Q.S)
        with self._lock:
            got = self._min.get(key)
        if got is not None:
            return got
        W = self.multiplier_space(H, Q)
        if not W[0]:
            res = []
        elif bass or self.is_gorenstein(H, Q):
            xs = [self.frac_elem(w, H) for w in W[0]]
            res = [self.order_hnf(list(H) + xs)]
            if bass:
                self._stat().bass_nodes += 1
            else:
                self._stat().gorenstein_nodes += 1
        else:
            res = self._minimal_by_lines(H, Q, W)
        with self._lock:
            self._min[key] = res
        return res

    def _residue_generator(self, H, Q: LocalPrime):
        """A G-coordinate vector whose class generates ``G/Q`` and its minimal polynomial."""
        p, n, f = self.p, self.n, Q.f
        K = ([list(r) for r in Q.K[0]], list(Q.K[1]))
        one_t = self.tcoords_int(H, self.one)
        if f == 1:
            return one_t, [p - 1, 1]
        cands = [[int(i == j) for j in range(n)] for i in range(n)]
        extra = itertools.product(range(p), repeat=n)
        while True:
            t = cands.pop(0) if cands else list(next(extra))
            a = self.elem(t, H)
            powers = [fpla.reduce(one_t, K, p)]
            cur = self.one
            while True:
                coeffs = _dependency(powers[:-1], powers[-1], n, p)
                if coeffs is not None:
                    break
                cur = self.mul(cur, a)
                powers.append(fpla.reduce(self.tcoords_int(H, cur), K, p))
            if len(powers) - 1 == f:
                return t, [(-c) % p for c in coeffs] + [1]

    def _minimal_by_lines(self, H, Q: LocalPrime, W):
        p, f = self.p, Q.f
        q = p**f
        Wb = [list(r) for r in W[0]]
        Wsp = (Wb, list(W[1]))
        m_p = len(Wb)
        xs = [self.frac_elem(w, H) for w in Wb]

        def wcoords_of(x):
            t = self.tcoords_frac(H, x)
            c = fpla.coordinates(t, Wsp, p)
            if c is None:
                raise ArithmeticError("element left the multiplier ring")  # pragma: no cover
            return c

        def element(u):
            x = [0] * self.n
            for c, v in zip(u, xs):
                if c:
                    x = [a + c * b for a, b in zip(x, v)]
            return x

        at, _ = self._residue_generator(H, Q)
        a_el = self.elem(at, H)
        A = [wcoords_of(self.mul(x, a_el)) for x in xs]
        stat = self._stat()

        def fspan(u):
            vecs = [u]
            for _ in range(f - 1):
                vecs.append(fpla.vec_mat(vecs[-1], A, p))
            return vecs

        def line_key(u):
            return tuple(tuple(r) for r in fpla.rref(fspan(u), m_p, p)[0])

        def is_order_line(u):
            x = element(u)
            sq = wcoords_of(self.mul(x, x))
            return fpla.in_span(sq, fpla.rref(fspan(u), m_p, p), p)

        def line_order(u):
            return self.order_hnf(list(H) + [element(v) for v in fspan(u)])

        def spin(u):
            x = element(u)
            cur = self.order_hnf(list(H) + [x])
            while True:
                nxt = self.order_hnf(list(cur) + [self.mul(r, x) for r in cur])
                if nxt == cur:
                    return cur
                cur = nxt

        candidates = {}
        if self.prune and q <= PRUNE_FIELD_LIMIT:
            phi = [wcoords_of(self.power(x, q)) for x in xs]
            seen = set()
            # lines in eigenspaces of phi_q: x^2 test, spin the failures
            for lam in _field_elements(p, f):
                Lm = _poly_matrix(lam, A, p, m_p)
                D = fpla.mat_add(phi, fpla.mat_scale(Lm, p - 1, p), p)
                ker = fpla.left_kernel(D, m_p, m_p, p)
                for u in _fq_lines(ker, A, f, p, m_p):
                    k = line_key(u)
                    if k in seen:
                        continue
                    seen.add(k)
                    stat.lines += 1
                    stat.eigenlines += 1
                    if is_order_line(u):
                        h = line_order(u)
                    else:
                        stat.e2 += 1
                        stat.spun += 1
                        h = spin(u)
                    candidates[h] = True
            if self.prune == "conservative":
                spaces = [fpla.identity(m_p)]
            else:
                # A minimal overorder whose residue field grows by a prime degree
                # l >= 3 contains a trace-zero element outside the residue field,
                # so it is reached from ker(1 + phi + ... + phi^(l-1)).  Every
                # other minimal overorder G' has G'/G of dimension one, hence is
                # an eigenline.
                spaces = []
                for ell in primerange(3, m_p // f + 2):
                    S = fpla.identity(m_p)
                    P = fpla.identity(m_p)
                    for _ in range(ell - 1):
                        P = fpla.mat_mul(P, phi, p)
                        S = fpla.mat_add(S, P, p)
                    spaces.append(fpla.left_kernel(S, m_p, m_p, p))
            for ker in spaces:
                for u in _fq_lines(ker, A, f, p, m_p):
                    k = line_key(u)
                    if k in seen:
                        continue
                    seen.add(k)
                    stat.lines += 1
                    stat.extension_spins += 1
                    stat.spun += 1
                    candidates[spin(u)] = True
        else:
            full = fpla.identity(m_p)
            for u in _fq_lines(full, A, f, p, m_p):
                stat.lines += 1
                if is_order_line(u):
                    candidates[line_order(u)] = True
                else:
                    stat.e2 += 1
                    stat.spun += 1
                    candidates[spin(u)] = True
        # inclusion-minimal candidates: larger orders have smaller diagonal products
        ordered = sorted(candidates, key=lambda h: (-prod(h[i][i] for i in range(self.n)), h))
        out = []
        for h in ordered:
            if not any(self.contains(h, g) for g in out):
                out.append(h)
        out.sort()
        return out

    # -- P-overorders (recursive) ------------------------------------------
    def pover(self, H, S, bass: bool = False) -> frozenset:
        """All ``Q``-overorders of ``H`` where ``Q`` is the prime with support ``S``."""
        key = (H, S)
        got = self._pover.get(key)
        if got is not None:
            return got
        Q = self.prime_with(H, S)
        if not bass:
            bass = self.is_bass(H, Q)
        result = {H}
        for G in self.minimal_at(H, Q, bass):
            over = [R for R in self.primes_of(G) if R.S <= S]
            if len(over) == 1:
                result |= self.pover(G, over[0].S, bass)
            else:
                parts = [self.pover(G, R.S, bass) for R in over]
                for combo in itertools.product(*parts):
                    result.add(self.order_hnf([r for h in combo for r in h]))
        res = frozenset(result)
        self._pover[key] = res
        return res

    def covers(self, H, S):
        """Minimal overorders of ``H`` whose conductor lies over the support ``S``."""
        out = set()
        for Q in self.primes_of(H):
            if Q.S <= S:
                out.update(self.minimal_at(H, Q))
        return sorted(out)

    def P_branch(self, S, edges: bool = True, label=None) -> Branch:
        self._label = label if label is not None else S
        nodes = sorted(self.pover(self.H0, S))
        e = None
        if edges:
            pos = {h: i for i, h in enumerate(nodes)}
            e = []
            for i, h in enumerate(nodes):
                for g in self.covers(h, S):
                    e.append((i, pos[g]))
        st = self.stats.get(self._label, BranchStats())
        return Branch(label=self._label, nodes=nodes, edges=e, stats=st.__dict__.copy())

    def p_branch(self, edges: bool = True, max_materialize: int | None = None) -> Branch:
        """All p-overorders as a branch of local HNF keys (product over the primes above p)."""
        sub = [self.P_branch(Q.S, edges) for Q in self.primes_of(self.H0)]
        total = prod(len(b) for b in sub)
        if max_materialize is not None and total > max_materialize:
            return Branch(label=self.p, nodes=[], edges=None, stats={"count": total, "parts": sub})
        if len(sub) == 1:
            b = sub[0]
            return Branch(label=self.p, nodes=b.nodes, edges=b.edges, stats={"parts": sub})
        combos = list(itertools.product(*[range(len(b)) for b in sub]))
        keys = {}
        for c in combos:
            keys[c] = self.order_hnf([r for bi, j in enumerate(c) for r in sub[bi].nodes[j]])
        nodes = sorted(set(keys.values()))
        pos = {h: i for i, h in enumerate(nodes)}
        e = None
        if edges:
            e = []
            for c in combos:
                for bi, b in enumerate(sub):
                    for ch, par in b.edges:
                        if c[bi] == ch:
                            up = c[:bi] + (par,) + c[bi + 1 :]
                            e.append((pos[keys[c]], pos[keys[up]]))
        return Branch(label=self.p, nodes=nodes, edges=e, stats={"parts": sub})


def _dependency(vecs, target, n, p):
    if not any(target):
        return [0] * len(vecs)
    if not vecs:
        return None
    M = [list(v) for v in vecs] + [[(-x) % p for x in target]]
    for kv in fpla.left_kernel(M, len(M), n, p):
        if kv[-1]:
            inv = pow(kv[-1], -1, p)
            return [(c * inv) % p for c in kv[:-1]]
    return None


def _field_elements(p, f):
    return list(itertools.product(range(p), repeat=f))


def _poly_matrix(coeffs, A, p, m):
    """``sum c_i A^i`` as an m x m matrix."""
    out = [[0] * m for _ in range(m)]
    P = fpla.identity(m)
    for c in coeffs:
        if c:
            out = fpla.mat_add(out, fpla.mat_scale(P, c, p), p)
        P = fpla.mat_mul(P, A, p)
    return out


def _fq_lines(vecs, A, f, p, m):
    """Representatives of the F_q-lines in the A-stable span of ``vecs``."""
    if not vecs:
        return
    E = fpla.rref([], m, p)
    span_rows = []
    basis = []
    for v in fpla.rref(vecs, m, p)[0]:
        v = list(v)
        if span_rows and fpla.in_span(v, fpla.rref(span_rows, m, p), p):
            continue
        basis.append(v)
        w = v
        for _ in range(f):
            span_rows.append(w)
            w = fpla.vec_mat(w, A, p)
    del E
    orbits = []
    for b in basis:
        orb = [b]
        for _ in range(f - 1):
            orb.append(fpla.vec_mat(orb[-1], A, p))
        orbits.append(orb)
    r = len(basis)
    for j in range(r):
        tail = [v for i in range(j + 1, r) for v in orbits[i]]
        for coeffs in itertools.product(range(p), repeat=len(tail)):
            x = list(basis[j])
            for c, v in zip(coeffs, tail):
                if c:
                    x = [(a + c * b) % p for a, b in zip(x, v)]
            yield x


# ---------------------------------------------------------------------------
# public wrappers


def local_context(order: Order, p: int, prune: bool = True) -> LocalContext:
    return order.cached(("local", p, prune), lambda: LocalContext(order, p, prune))


def _orders(ctx: LocalContext, keys):
    return [Order(ctx.to_lattice(h)) for h in keys]


def minimal_overorders_at_P(order: Order, P: PrimeIdeal, prune: bool = True) -> list[Order]:
    """Minimal overorders of ``order`` with conductor ``P``."""
    ctx = local_context(order, P.p, prune)
    S = ctx.match_prime(P)
    Q = ctx.prime_with(ctx.H0, S)
    return _orders(ctx, ctx.minimal_at(ctx.H0, Q))


def P_overorders(order: Order, P: PrimeIdeal, prune: bool = True) -> list[Order]:
    """All overorders whose conductor is P-primary."""
    ctx = local_context(order, P.p, prune)
    S = ctx.match_prime(P)
    return _orders(ctx, sorted(ctx.pover(ctx.H0, S)))


def P_overorder_count(order: Order, P: PrimeIdeal, prune: bool = True):
    """``(count, stats)`` for the P-branch without building global lattices."""
    ctx = local_context(order, P.p, prune)
    S = ctx.match_prime(P)
    b = ctx.P_branch(S, edges=False, label=S)
    return len(b), b.stats


def p_overorders_etale(order: Order, p: int, prune: bool = True) -> list[Order]:
    """All overorders of p-power index via the primes above p."""
    ctx = local_context(order, p, prune)
    b = ctx.p_branch(edges=False)
    return _orders(ctx, b.nodes)


def p_branch_etale(order: Order, p: int, prune: bool = True, edges: bool = True, max_materialize=None) -> Branch:
    """The p-branch with nodes as global lattices."""
    ctx = local_context(order, p, prune)
    b = ctx.p_branch(edges=edges, max_materialize=max_materialize)
    if b.nodes:
        b.nodes = [ctx.to_lattice(h) for h in b.nodes]
    return b
