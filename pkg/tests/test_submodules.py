from __future__ import annotations

import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from overorders.engine.submodules import (
    SubmoduleSearchSpace,
    _minimal_exhaustive,
    _minimal_socle,
    all_stable_subgroups,
    all_stable_submodules,
    minimal_stable_submodules,
    spin_subspace,
)
from overorders.exactla import fpla


def naive_subgroups(divisors, actions=()):
    """Every subgroup of prod Z/d_i generated by at most len(divisors) elements."""
    k = len(divisors)
    elems = list(itertools.product(*(range(d) for d in divisors)))

    def close(gens):
        S = {tuple([0] * k)}
        frontier = list(S)
        while frontier:
            new = []
            for s in frontier:
                for g in gens:
                    t = tuple((a + b) % d for a, b, d in zip(s, g, divisors))
                    if t not in S:
                        S.add(t)
                        new.append(t)
            frontier = new
        return frozenset(S)

    out = set()
    for gens in itertools.combinations_with_replacement(elems, k):
        H = close(gens)
        stable = all(
            tuple(sum(h[i] * A[i][j] for i in range(k)) % divisors[j] for j in range(k)) in H for A in actions for h in H
        )
        if stable:
            out.add(H)
    return out


def test_trivial_groups():
    assert all_stable_subgroups([], []) == [()]
    assert len(all_stable_subgroups([1, 1], [])) == 1


def test_klein_four():
    assert len(all_stable_subgroups([2, 2], [])) == 5


def test_z10_times_z100():
    assert len(all_stable_subgroups([10, 100], [])) == 112


def test_cyclic_counts_match_divisor_count():
    for n in (1, 2, 12, 36, 97, 360):
        subs = all_stable_subgroups([n], []) if n > 1 else [()]
        assert len(subs) == sum(1 for d in range(1, n + 1) if n % d == 0)


def test_matches_naive_enumeration():
    for divs in ([2, 4], [4, 8], [3, 9], [2, 6], [2, 2, 2], [6, 6]):
        assert len(all_stable_subgroups(divs, [])) == len(naive_subgroups(divs)), divs


def test_matches_naive_with_action():
    # swap action on Z/4 x Z/4 and a nilpotent action on (Z/2)^3
    cases = [
        ([4, 4], [[[0, 1], [1, 0]]]),
        ([2, 2, 2], [[[0, 1, 0], [0, 0, 1], [0, 0, 0]]]),
        ([3, 9], [[[1, 3], [0, 2]]]),
    ]
    for divs, acts in cases:
        assert len(all_stable_subgroups(divs, acts)) == len(naive_subgroups(divs, acts)), divs


def brute_subspaces(d, p):
    seen = set()
    for r in range(d + 1):
        for gens in itertools.combinations(list(itertools.product(range(p), repeat=d)), r):
            R, _ = fpla.rref([list(g) for g in gens], d, p) if gens else ([], [])
            seen.add(tuple(tuple(x) for x in R))
    return seen


def is_stable(key, actions, p, d):
    return spin_subspace([list(r) for r in key], actions, p, d) == key


def matrices(p, d, count):
    return st.lists(
        st.lists(st.lists(st.integers(0, p - 1), min_size=d, max_size=d), min_size=d, max_size=d),
        min_size=count,
        max_size=count,
    )


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([(2, 3), (2, 4), (3, 2), (3, 3)]).flatmap(lambda pd: st.tuples(st.just(pd), matrices(pd[0], pd[1], 2))))
def test_minimal_and_all_against_brute_force(args):
    (p, d), acts = args
    S = SubmoduleSearchSpace(d, p, acts)
    stable = {k for k in brute_subspaces(d, p) if is_stable(k, acts, p, d)}
    assert set(all_stable_submodules(S)) == stable
    nonzero = [k for k in stable if k]

    def inside(m, k):
        return fpla.is_subspace(fpla.span([list(r) for r in m], d, p), fpla.span([list(r) for r in k], d, p), p)

    minimal = {k for k in nonzero if not any(len(m) < len(k) and inside(m, k) for m in nonzero)}
    assert set(minimal_stable_submodules(S)) == minimal


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(2, 5), (2, 6), (3, 4), (5, 3)]).flatmap(lambda pd: st.tuples(st.just(pd), matrices(pd[0], pd[1], 1))))
def test_socle_search_matches_exhaustive(args):
    (p, d), (M,) = args
    # a commuting family: M and M^2 + 1
    M2 = fpla.mat_mul(M, M, p)
    N = [[(M2[i][j] + (i == j)) % p for j in range(d)] for i in range(d)]
    S = SubmoduleSearchSpace(d, p, [M, N], commutative=True)
    assert sorted(_minimal_socle(S)) == sorted(_minimal_exhaustive(S))


def test_no_actions_gives_all_lines():
    S = SubmoduleSearchSpace(2, 3, [])
    assert len(minimal_stable_submodules(S)) == 4
    assert minimal_stable_submodules(SubmoduleSearchSpace(0, 3, [])) == []
