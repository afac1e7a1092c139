from collections import Counter
from concurrent.futures import ThreadPoolExecutor

import pytest
from hypothesis import given, settings, strategies as st

from ktrees.errors import IndexOutOfRange, InvalidParams
from ktrees.formulas import root_plane, total_plane
from ktrees.sampler import (
    CountCache,
    count_cache,
    rank,
    rank_space,
    sample_many,
    sample_uniform,
    unrank,
)
from ktrees.trees import PlaneTree, render_plane, validate_plane


@pytest.mark.parametrize("k, n, size", [(2, 2, 3), (1, 4, 5), (3, 1, 3)])
def test_rank_space(k, n, size):
    assert rank_space(k, n) == size


def test_unrank_examples():
    assert {render_plane(unrank(2, 2, i)) for i in range(3)} == {"1(1)", "1(2)", "2(1)"}
    assert unrank(1, 1, 0) == PlaneTree(1)
    with pytest.raises(IndexOutOfRange):
        unrank(2, 2, 3)
    with pytest.raises(IndexOutOfRange):
        unrank(2, 2, -1)


def test_unrank_follows_enumeration_order(oracle):
    for k in range(1, 4):
        for n in range(1, 7):
            expected = oracle.plane(k, n)
            assert [unrank(k, n, i) for i in range(len(expected))] == list(expected)


@given(st.integers(1, 4), st.integers(1, 25), st.data())
@settings(max_examples=80, deadline=None)
def test_rank_inverts_unrank(k, n, data):
    index = data.draw(st.integers(0, total_plane(k, n) - 1))
    tree = unrank(k, n, index)
    assert validate_plane(tree, k) and tree.size() == n
    assert rank(k, tree) == index


def test_rank_rejects_invalid_tree():
    with pytest.raises(InvalidParams):
        rank(2, PlaneTree(2, (PlaneTree(2),)))


def test_count_cache_matches_closed_form():
    for k in range(1, 5):
        cc = CountCache(k)
        for m in range(1, 13):
            for r in range(1, k + 1):
                assert cc.c(r, m) == root_plane(k, m, r)
            assert cc.total(m) == total_plane(k, m)


def test_count_cache_is_thread_safe():
    def fill(m):
        return count_cache(5).total(m)

    with ThreadPoolExecutor(max_workers=8) as pool:
        got = list(pool.map(fill, range(1, 30)))
    assert got == [total_plane(5, m) for m in range(1, 30)]


def test_sampling_is_deterministic():
    assert sample_many(2, 5, 10, 12345) == sample_many(2, 5, 10, 12345)
    assert sample_uniform(3, 8, 2 ** 64 - 1) == sample_uniform(3, 8, 2 ** 64 - 1)
    with pytest.raises(InvalidParams):
        sample_uniform(2, 3, 2 ** 64)
    with pytest.raises(InvalidParams):
        sample_many(2, 3, -1, 0)


def test_sampling_is_roughly_uniform():
    # 3 single-vertex trees for k=3; 6000 draws, each share within 10%
    draws = Counter(t.label for t in sample_many(3, 1, 6000, 99))
    assert set(draws) == {1, 2, 3}
    assert all(1800 < v < 2200 for v in draws.values())
    # 10 trees for k=2, n=3: chi-square well under the 0.1% critical value (27.9)
    draws = Counter(sample_many(2, 3, 10000, 7))
    assert len(draws) == 10
    chi2 = sum((v - 1000) ** 2 / 1000 for v in draws.values())
    assert chi2 < 27.9


def test_large_tree_sample():
    tree = sample_uniform(4, 200, 1)
    assert tree.size() == 200 and validate_plane(tree, 4)
