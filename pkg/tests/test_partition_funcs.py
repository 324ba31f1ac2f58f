import pytest
from hypothesis import given, settings, strategies as st

from abar.partition_funcs import (
    BRUTE_FORCE_LIMIT,
    Partition,
    brute_tcore_count,
    coeffs_abar,
    coeffs_abar_mod,
    coeffs_ct,
    hook_numbers,
    is_t_core,
    partition_series,
    partitions,
)
from abar.series_core import reduce_mod

from oracles import abar_reference, ct_reference, overpartition_numbers, partition_numbers


@st.composite
def a_partition(draw, max_n=25):
    n = draw(st.integers(0, max_n))
    parts = []
    while n:
        part = draw(st.integers(1, n))
        parts.append(part)
        n -= part
    return Partition(tuple(sorted(parts, reverse=True)))


def test_hooks_of_the_worked_example():
    assert hook_numbers(Partition((4, 3, 1))).hooks == ((6, 4, 3, 1), (4, 2, 1), (1,))
    assert hook_numbers(Partition((1,))).hooks == ((1,),)
    assert hook_numbers(Partition((2, 2))).hooks == ((3, 2), (2, 1))


def test_t_core_examples():
    p = Partition((4, 3, 1))
    assert is_t_core(p, 7)
    assert is_t_core(p, 5)
    assert not is_t_core(p, 2)
    assert all(is_t_core(Partition(()), t) for t in range(2, 10))


def test_brute_counts():
    assert brute_tcore_count(0, 5) == 1
    assert brute_tcore_count(3, 3) == 0
    assert brute_tcore_count(4, 3) == 2


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((3, 0))
    with pytest.raises(ValueError):
        is_t_core(Partition((1,)), 1)
    with pytest.raises(ValueError):
        brute_tcore_count(BRUTE_FORCE_LIMIT + 1, 3)


def test_enumeration_counts_match_partition_numbers():
    p = partition_numbers(23)
    for n in range(23):
        parts = list(partitions(n))
        assert len(parts) == p[n]
        assert len(set(parts)) == p[n]
        assert all(q.n == n for q in parts)


def test_partition_series():
    assert partition_series(100).tolist() == partition_numbers(100)


def test_ct_examples():
    assert coeffs_ct(3, 7).tolist() == [1, 1, 2, 0, 2, 1, 2]
    for t in range(2, 9):
        assert coeffs_ct(t, 5)[0] == 1


@pytest.mark.parametrize("t", range(2, 8))
def test_ct_matches_hook_enumeration(t):
    got = coeffs_ct(t, 31).tolist()
    assert got == [brute_tcore_count(n, t) for n in range(31)]


@pytest.mark.parametrize("t", [2, 3, 5, 9])
def test_ct_matches_list_reference(t):
    assert coeffs_ct(t, 150).tolist() == ct_reference(t, 150)


def test_abar_examples():
    assert coeffs_abar(3, 7).tolist() == [1, 2, 4, 2, 2, 0, 4]
    assert coeffs_abar_mod(3, 2, 7).tolist() == [1, 0, 0, 0, 0, 0, 0]
    assert coeffs_abar(5, 5).tolist() == [1, 2, 4, 8, 14]
    # the residues mod 5 of the line above
    assert coeffs_abar_mod(5, 5, 5).tolist() == [1, 2, 4, 3, 4]
    for t in range(2, 12):
        assert coeffs_abar(t, 3)[0] == 1


@pytest.mark.parametrize("t", range(2, 9))
def test_abar_forms_agree(t):
    assert coeffs_abar(t, 300, form="f") == coeffs_abar(t, 300, form="phi")
    coeffs_abar(t, 300, form="both")


@pytest.mark.parametrize("t", [2, 3, 4, 7])
def test_abar_matches_list_reference(t):
    assert coeffs_abar(t, 200).tolist() == abar_reference(t, 200)


@pytest.mark.parametrize("t", [2, 3, 5, 9, 15])
@pytest.mark.parametrize("M", [2, 3, 4, 9, 7, 1024])
def test_residue_stream_matches_exact(t, M):
    assert coeffs_abar_mod(t, M, 200) == reduce_mod(coeffs_abar(t, 200), M)


def test_t_below_two_is_rejected():
    for fn in (coeffs_ct, coeffs_abar):
        for t in (0, 1, -3):
            with pytest.raises(ValueError):
                fn(t, 10)
    with pytest.raises(ValueError):
        coeffs_abar(3, 10, form="theta")


def test_large_t_abar_is_simple_at_the_start():
    # below q^t only 1/phi(-q) contributes: overpartition numbers
    t = 13
    assert coeffs_abar(t, t).tolist() == overpartition_numbers(t)


@settings(max_examples=200, deadline=None)
@given(a_partition(20), st.integers(2, 9))
def test_conjugation_preserves_t_cores(p, t):
    assert is_t_core(p, t) == is_t_core(p.conjugate(), t)
    assert p.conjugate().conjugate() == p


@settings(max_examples=100, deadline=None)
@given(a_partition())
def test_hook_multiset_is_conjugation_invariant(p):
    assert sorted(p.hooks.values()) == sorted(p.conjugate().hooks.values())
    assert len(p.hooks.values()) == p.n


def test_conjugation_symmetry_exhaustive():
    for n in range(21):
        for p in partitions(n):
            for t in (2, 3, 4, 5):
                assert is_t_core(p, t) == is_t_core(p.conjugate(), t)
