from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from lidstone.multiindex import (
    IndexPair, MultiIndex, enumerate_index_set, graded_lex_key, in_index_set, multi_indices_of_degree,
    multi_indices_up_to, multifactorial, norm,
)


@pytest.mark.parametrize("t, expected", [((1, 1), 2), ((0, 0, 0), 0), ((2, 3, 4), 9)])
def test_norm(t, expected):
    assert norm(t) == expected
    assert MultiIndex(t).norm == expected


@pytest.mark.parametrize("t, expected", [((2, 3), 12), ((0, 0), 1), ((4,), 24)])
def test_multifactorial(t, expected):
    assert multifactorial(t) == expected
    assert MultiIndex(t).factorial() == expected


@pytest.mark.parametrize("t, i, expected", [((1, 1), 0, True), ((1, 1), 1, False), ((0, 2), 1, True),
                                            ((2, 1), 1, False), ((2, 2), 2, True), ((1, 0), 0, False)])
def test_membership(t, i, expected):
    assert in_index_set(t, i) is expected
    assert in_index_set(IndexPair(MultiIndex(t), i)) is expected


def test_invalid_inputs():
    with pytest.raises(ValueError):
        MultiIndex((1, -1))
    with pytest.raises(ValueError):
        IndexPair(MultiIndex((0, 0)), 3)
    with pytest.raises(ValueError):
        MultiIndex(())


def test_enumerate_small_cases():
    pairs = enumerate_index_set(1, 0)
    assert [(tuple(p.t), p.i) for p in pairs] == [((0,), 0), ((0,), 1)]
    pairs = enumerate_index_set(2, 2)
    assert len(pairs) == 10
    at_two = [(tuple(p.t), p.i) for p in pairs if p.t.norm == 2]
    assert sorted(at_two) == sorted([((2, 0), 0), ((1, 1), 0), ((0, 2), 0), ((2, 0), 1), ((0, 2), 1),
                                     ((2, 0), 2), ((0, 2), 2)])


def _brute_force(n, max_norm):
    out = set()
    for t in itertools.product(range(max_norm + 1), repeat=n):
        if sum(t) > max_norm or sum(t) % 2:
            continue
        for i in range(n + 1):
            if all(x % 2 == 0 for x in t[:i]):
                out.add((t, i))
    return out


@pytest.mark.parametrize("n, max_norm", [(1, 6), (2, 5), (3, 2), (3, 6), (4, 4)])
def test_enumerate_matches_double_loop(n, max_norm):
    pairs = enumerate_index_set(n, max_norm)
    got = [(tuple(p.t), p.i) for p in pairs]
    assert len(got) == len(set(got))
    assert set(got) == _brute_force(n, max_norm)


def test_enumeration_order_is_norm_then_graded_lex_then_point():
    pairs = enumerate_index_set(3, 4)
    keys = [(p.t.norm, graded_lex_key(p.t), p.i) for p in pairs]
    assert keys == sorted(keys)
    assert pairs == sorted(pairs)
    # larger leading exponent first
    assert [tuple(t) for t in multi_indices_of_degree(2, 2)] == [(2, 0), (1, 1), (0, 2)]


def test_multi_indices_up_to_count():
    from math import comb
    assert len(multi_indices_up_to(3, 5)) == comb(5 + 3, 3)


@given(st.lists(st.integers(0, 6), min_size=1, max_size=4), st.integers(0, 4))
def test_membership_definition(t, i):
    i = min(i, len(t))
    expected = sum(t) % 2 == 0 and all(x % 2 == 0 for x in t[:i])
    assert in_index_set(t, i) is expected


@given(st.lists(st.integers(0, 5), min_size=1, max_size=4), st.lists(st.integers(0, 5), min_size=1, max_size=4))
def test_addition_is_componentwise(a, b):
    k = min(len(a), len(b))
    s = MultiIndex(a[:k]) + MultiIndex(b[:k])
    assert tuple(s) == tuple(x + y for x, y in zip(a[:k], b[:k]))
    assert s.norm == sum(a[:k]) + sum(b[:k])


def test_pair_unpacks():
    t, i = IndexPair(MultiIndex((2, 0)), 1)
    assert tuple(t) == (2, 0) and i == 1
