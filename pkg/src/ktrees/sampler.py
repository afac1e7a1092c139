"""Exact uniform sampling of k-plane trees by ranking and unranking.

Trees are ordered by root label, then by their branch sequence.  A sequence is
ordered by the size of its first branch, then that branch's root label, then
the rank of that branch, then the rank of the remaining branches.
"""
from __future__ import annotations

import random
import threading

from .errors import IndexOutOfRange, InvalidParams
from .formulas import total_plane
from .trees import PlaneTree, validate_plane

SEED_BITS = 64


class CountCache:
    """Memoised counts for the root decomposition of k-plane trees.

    ``c(r, m)``: trees with m vertices and root label r.
    ``s(r, m)``: branch sequences of total size m whose roots are <= k+1-r.
    """

    def __init__(self, k: int):
        if k < 1:
            raise InvalidParams("k must be >= 1")
        self.k = k
        self._c: dict[tuple[int, int], int] = {}
        self._s: dict[tuple[int, int], int] = {}
        self._lock = threading.Lock()

    def c(self, r: int, m: int) -> int:
        if m < 1:
            return 0
        key = (r, m)
        if key not in self._c:
            value = self.s(r, m - 1)
            with self._lock:
                self._c[key] = value
        return self._c[key]

    def s(self, r: int, m: int) -> int:
        if m == 0:
            return 1
        key = (r, m)
        if key not in self._s:
            # fill smaller sizes bottom-up to keep recursion shallow
            for size in range(1, m):
                if (r, size) not in self._s:
                    self.s(r, size)
            value = sum(self.c(t, j) * self.s(r, m - j)
                        for j in range(1, m + 1) for t in range(1, self.k + 2 - r))
            with self._lock:
                self._s[key] = value
        return self._s[key]

    def total(self, n: int) -> int:
        return sum(self.c(r, n) for r in range(1, self.k + 1))


_caches: dict[int, CountCache] = {}
_caches_lock = threading.Lock()


def count_cache(k: int) -> CountCache:
    with _caches_lock:
        if k not in _caches:
            _caches[k] = CountCache(k)
        return _caches[k]


def rank_space(k: int, n: int) -> int:
    if k < 1 or n < 1:
        raise InvalidParams("need k >= 1 and n >= 1")
    return total_plane(k, n)


def _unrank_tree(cc: CountCache, r: int, m: int, index: int) -> PlaneTree:
    return PlaneTree(r, tuple(_unrank_seq(cc, r, m - 1, index)))


def _first_branch_block(cc: CountCache, r: int, m: int, index: int) -> tuple[int, int, int]:
    """Size j and root label t of the first branch, and the index within that block."""
    for j in range(1, m + 1):
        rest = cc.s(r, m - j)
        for t in range(1, cc.k + 2 - r):
            block = cc.c(t, j) * rest
            if index < block:
                return j, t, index
            index -= block
    raise AssertionError("index exceeds the sequence count")


def _unrank_seq(cc: CountCache, r: int, m: int, index: int) -> list[PlaneTree]:
    branches = []
    while m > 0:
        j, t, index = _first_branch_block(cc, r, m, index)
        first, index = divmod(index, cc.s(r, m - j))
        branches.append(_unrank_tree(cc, t, j, first))
        m -= j
    return branches


def unrank(k: int, n: int, index: int) -> PlaneTree:
    """The ``index``-th k-plane tree with n vertices (0-based)."""
    total = rank_space(k, n)
    if not 0 <= index < total:
        raise IndexOutOfRange(f"index {index} outside [0, {total})")
    cc = count_cache(k)
    for r in range(1, k + 1):
        block = cc.c(r, n)
        if index < block:
            return _unrank_tree(cc, r, n, index)
        index -= block
    raise AssertionError("count cache disagrees with the closed-form total")


def _rank_tree(cc: CountCache, tree: PlaneTree, m: int) -> int:
    return _rank_seq(cc, tree.label, tree.children, m - 1)


def _rank_seq(cc: CountCache, r: int, branches: tuple[PlaneTree, ...], m: int) -> int:
    if not branches:
        return 0
    first, rest = branches[0], branches[1:]
    j = first.size()
    offset = 0
    for jj in range(1, j):
        offset += sum(cc.c(t, jj) for t in range(1, cc.k + 2 - r)) * cc.s(r, m - jj)
    remaining = cc.s(r, m - j)
    offset += sum(cc.c(t, j) for t in range(1, first.label)) * remaining
    return offset + _rank_tree(cc, first, j) * remaining + _rank_seq(cc, r, rest, m - j)


def rank(k: int, tree: PlaneTree) -> int:
    """Inverse of :func:`unrank`."""
    if not validate_plane(tree, k):
        raise InvalidParams(f"not a {k}-plane tree")
    cc = count_cache(k)
    n = tree.size()
    return sum(cc.c(r, n) for r in range(1, tree.label)) + _rank_tree(cc, tree, n)


def _check_seed(seed: int):
    if not 0 <= seed < 1 << SEED_BITS:
        raise InvalidParams("seed must be an unsigned 64-bit integer")


def sample_many(k: int, n: int, count: int, seed: int) -> list[PlaneTree]:
    """``count`` independent uniform draws from one seeded stream."""
    _check_seed(seed)
    if count < 0:
        raise InvalidParams("count must be >= 0")
    total = rank_space(k, n)
    rng = random.Random(seed)
    # randrange draws fixed-width bit blocks and rejects out-of-range values,
    # so every index is exactly equally likely.
    return [unrank(k, n, rng.randrange(total)) for _ in range(count)]


def sample_uniform(k: int, n: int, seed: int) -> PlaneTree:
    return sample_many(k, n, 1, seed)[0]
