import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chowforge.errors import CapacityError, LoopError, NotAFlatError, ParseError, RankError
from chowforge.identities import check_counting_lemma
from chowforge.matroid import Matroid, popcount, random_matroid

from corpus import SMALL, boolean_family, random_family, uniform_family

U34 = Matroid.uniform(3, 4)
U23 = Matroid.uniform(2, 3)


def same_table(M, N):
    """Equal rank functions up to the positional relabelling of minors."""
    return M.n == N.n and all(M.rank_mask(m) == N.rank_mask(m) for m in range(1 << M.n))


def test_rank_examples():
    assert U34.rank([1, 2]) == 2
    assert U34.rank([]) == 0
    assert U34.rank([1, 2, 3, 4]) == 3


def test_closure_examples():
    assert U23.to_labels(U23.closure([1])) == (1,)
    assert U23.to_labels(U23.closure([1, 2])) == (1, 2, 3)
    for M in SMALL:
        assert M.closure(M.labels) == M.full


def test_flat_examples():
    lat = U34.lattice
    assert sorted(U34.to_labels(F) for F in lat.flats_by_rank[1]) == [(1,), (2,), (3,), (4,)]
    assert len(lat.flats_by_rank[2]) == 6
    assert len(U23.lattice.flats_by_rank[1]) == 3
    assert len(Matroid.boolean(3).lattice.proper) == 6


def test_flat_lattice_shape():
    for M in SMALL + list(random_family()):
        lat = M.lattice
        assert list(lat.flats_by_rank[0]) == [0]
        assert list(lat.flats_by_rank[M.r]) == [M.full]
        for k in range(M.r):
            for F in lat.flats_by_rank[k]:
                assert any(not F & ~G for G in lat.flats_by_rank[k + 1])


def test_uniform_flat_counts():
    from math import comb

    for M in uniform_family():
        for k in range(M.r):
            assert len(M.lattice.flats_by_rank[k]) == comb(M.n, k)


def test_every_closure_is_listed_once():
    for M in SMALL:
        closures = {M.closure(S) for S in range(1 << M.n)}
        assert closures == set(M.lattice.rank_of)


def test_minor_examples():
    assert same_table(U34.minor([], [1, 2]), Matroid.uniform(2, 2))
    assert same_table(U34.minor([1], U34.labels), Matroid.uniform(2, 3))
    assert same_table(U34.minor([], U34.labels), U34)
    with pytest.raises(NotAFlatError):
        U34.minor([1, 2], [1])


def test_minor_keeps_labels():
    m = U34.contract([2])
    assert m.labels == (1, 3, 4)
    assert m.rank([3, 4]) == 2


def test_minor_of_minor():
    M = Matroid.boolean(4)
    outer = M.minor([1], M.labels)
    inner = outer.minor([2], [2, 3, 4])
    direct = M.minor([1, 2], [1, 2, 3, 4])
    assert same_table(inner, direct)
    assert inner.labels == direct.labels


def test_delete_examples():
    assert same_table(U34.delete(4), Matroid.uniform(3, 3))
    assert same_table(U23.delete(1), Matroid.uniform(2, 2))
    assert same_table(Matroid.boolean(3).delete(3), Matroid.boolean(2))
    with pytest.raises(RankError):
        Matroid.uniform(1, 1).delete(1)


def test_coloop_examples():
    assert Matroid.uniform(3, 3).is_coloop(1)
    assert not U34.is_coloop(1)
    assert not Matroid.uniform(1, 2).is_coloop(2)


def test_count_flags_examples():
    assert U34.count_flags([], [1]) == 4
    assert U34.count_flags([], [1, 2]) == 12
    assert U34.count_flags([], []) == 1
    assert U34.count_flags_avoiding([], [1], 1) == 3
    assert U34.count_flags_avoiding([], [], 1) == 1
    assert U34.count_flags_avoiding([], [2], 1) == 3


def test_count_flags_against_enumeration():
    M = Matroid.boolean(4)
    flags = list(M.flags())
    for ranks in ([1], [2], [1, 3], [1, 2, 3]):
        brute = sum(1 for f in flags if [M.rank_mask(F) for F in f] == ranks)
        assert M.count_flags([], ranks) == brute
    base = [M.to_mask([1, 2])]
    brute = sum(1 for F in M.lattice.flats_by_rank[1] if not F & ~base[0])
    assert M.count_flags(base, [1]) == brute == 2
    above = sum(1 for F in M.lattice.flats_by_rank[3] if not base[0] & ~F)
    assert M.count_flags(base, [3]) == above == 2


def test_count_flags_rejects_non_flats():
    M = Matroid.uniform(2, 3)
    with pytest.raises(NotAFlatError):
        M.count_flags([M.to_mask([1, 2])], [1])


def test_dragon_hall_rado_examples():
    assert U34.dragon_hall_rado([[1, 2], [3, 4]])
    assert not U34.dragon_hall_rado([[1], [1]])
    assert U34.dragon_hall_rado([[1, 2]])
    with pytest.raises(ParseError):
        U34.dragon_hall_rado([[]])


def test_counting_lemma_all_corpus():
    for M in uniform_family(5) + boolean_family(4) + list(random_family()):
        assert check_counting_lemma(M)[0], M


def test_loops_rejected():
    with pytest.raises(LoopError):
        Matroid.from_bases(3, [(1, 2)])


def test_bad_bases_rejected():
    with pytest.raises(ParseError):
        Matroid.from_bases(3, [(1, 2), (2,)])
    with pytest.raises(ParseError):
        Matroid.from_bases(4, [(1, 2), (3, 4)])
    with pytest.raises(CapacityError):
        Matroid.uniform(2, 13).__class__.from_bases(13, [(1, 2)])


def test_json_round_trip():
    for M in SMALL:
        again = Matroid.from_json(M.to_json())
        assert same_table(again, M)
    assert same_table(Matroid.from_json({"type": "uniform", "r": 2, "n": 4}), Matroid.uniform(2, 4))
    with pytest.raises(ParseError):
        Matroid.from_json({"type": "graphic"})
    with pytest.raises(ParseError):
        Matroid.from_json({"type": "uniform", "r": 2})


def test_random_matroids_are_loopless():
    rng = random.Random(5)
    for _ in range(10):
        M = random_matroid(6, 3, rng)
        assert M.r == 3
        assert all(M.rank([e]) == 1 for e in M.labels)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10**6), st.integers(2, 6), st.integers(1, 4))
def test_rank_axioms_on_random_matroids(seed, n, r):
    r = min(r, n)
    M = random_matroid(n, r, random.Random(seed))
    for A in range(1 << n):
        for e in range(n):
            step = M.rank_mask(A | 1 << e) - M.rank_mask(A)
            assert step in (0, 1)
    for A, B in combinations(range(1 << n), 2):
        assert M.rank_mask(A | B) + M.rank_mask(A & B) <= M.rank_mask(A) + M.rank_mask(B)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_closure_properties(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 6)
    M = random_matroid(n, rng.randint(1, min(n, 3)), rng)
    for S in range(1 << M.n):
        c = M.closure(S)
        assert not S & ~c
        assert M.closure(c) == c
        assert M.rank_mask(c) == M.rank_mask(S)
        for e in range(M.n):
            if not c >> e & 1:
                assert M.rank_mask(c | 1 << e) == M.rank_mask(c) + 1


def test_flags_enumeration_counts():
    # complete flags of the Boolean matroid are permutations minus the top step
    M = Matroid.boolean(4)
    complete = [f for f in M.flags() if len(f) == 3]
    assert len(complete) == 24
    assert list(M.flags())[0] == ()
    assert popcount(M.full) == 4
