"""Brute-force generation of k-plane and k-noncrossing trees.

These are the independent oracles for the closed forms and the series
engine, so they deliberately avoid any counting shortcut.
"""
from __future__ import annotations

import itertools
import os
from collections import Counter
from typing import Iterable, Union

from .errors import InvalidParams, LimitExceeded
from .trees import (
    NoncrossingTree,
    PlaneTree,
    constrained_edges,
    histogram,
    is_noncrossing,
    root_label,
)

PLANE_CAP = 8
NONCROSSING_CAP = 7
CAP_ENV = "KTREES_ORACLE_CAP"


def oracle_cap(default: int) -> int:
    """Soft size limit, raised (never lowered) by ``$KTREES_ORACLE_CAP``."""
    raw = os.environ.get(CAP_ENV)
    if not raw:
        return default
    try:
        return max(default, int(raw))
    except ValueError:
        raise InvalidParams(f"{CAP_ENV} must be an integer, got {raw!r}") from None


def _check(k: int, n: int, cap: int):
    if k < 1 or n < 1:
        raise InvalidParams("need k >= 1 and n >= 1")
    if n > cap:
        raise LimitExceeded(f"n={n} exceeds the oracle cap {cap} (set {CAP_ENV} to raise it)")


def enumerate_kplane(k: int, n: int) -> list[PlaneTree]:
    """Every k-plane tree with n vertices, exactly once.

    Trees are built from the root decomposition: a root labelled r followed by
    a sequence of branches whose roots carry labels in 1..k+1-r.  The order is
    root label, then first-branch size, first-branch root label, first branch
    (recursively), remaining branches; it coincides with
    :func:`ktrees.sampler.unrank`.
    """
    _check(k, n, oracle_cap(PLANE_CAP))
    trees: dict[tuple[int, int], list[PlaneTree]] = {}
    seqs: dict[tuple[int, int], list[tuple[PlaneTree, ...]]] = {}

    def with_root(r: int, m: int) -> list[PlaneTree]:
        key = (r, m)
        if key not in trees:
            trees[key] = [PlaneTree(r, s) for s in sequences(k + 1 - r, m - 1)]
        return trees[key]

    def sequences(max_label: int, m: int) -> list[tuple[PlaneTree, ...]]:
        key = (max_label, m)
        if key not in seqs:
            if m == 0:
                seqs[key] = [()]
            else:
                out = []
                for j in range(1, m + 1):
                    for t in range(1, max_label + 1):
                        rests = sequences(max_label, m - j)
                        for first in with_root(t, j):
                            out.extend((first,) + rest for rest in rests)
                seqs[key] = out
        return seqs[key]

    return [t for r in range(1, k + 1) for t in with_root(r, n)]


def prufer_trees(n: int) -> Iterable[tuple[tuple[int, int], ...]]:
    """Edge sets of all labelled trees on 1..n, by Prüfer decoding."""
    if n == 1:
        yield ()
        return
    if n == 2:
        yield ((1, 2),)
        return
    for seq in itertools.product(range(1, n + 1), repeat=n - 2):
        degree = [1] * (n + 1)
        for v in seq:
            degree[v] += 1
        edges = []
        for v in seq:
            leaf = next(u for u in range(1, n + 1) if degree[u] == 1)
            edges.append((min(leaf, v), max(leaf, v)))
            degree[leaf] -= 1
            degree[v] -= 1
        u, w = (x for x in range(1, n + 1) if degree[x] == 1)
        edges.append((u, w))
        yield tuple(sorted(edges))


def noncrossing_shapes(n: int) -> list[tuple[tuple[int, int], ...]]:
    return sorted(e for e in prufer_trees(n) if is_noncrossing(e))


def enumerate_knoncrossing(k: int, n: int) -> list[NoncrossingTree]:
    """Every k-noncrossing tree on v1..vn: shapes sorted by edge list, labels
    lexicographic within a shape."""
    _check(k, n, oracle_cap(NONCROSSING_CAP))
    out = []
    for edges in noncrossing_shapes(n):
        rule = [(p - 1, c - 1) for p, c in constrained_edges(n, edges)]
        for labels in itertools.product(range(1, k + 1), repeat=n):
            if all(labels[p] + labels[c] <= k + 1 for p, c in rule):
                out.append(NoncrossingTree(labels, edges))
    return out


def count_refined(trees: Iterable[Union[PlaneTree, NoncrossingTree]], k: int
                  ) -> dict[tuple[int, tuple[int, ...]], int]:
    """Occurrences keyed by ``(root label, label counts)``."""
    counts: Counter = Counter()
    for t in trees:
        counts[root_label(t), histogram(t, k).counts] += 1
    return dict(counts)


def _vertices_and_edges(tree: PlaneTree) -> tuple[int, list[tuple[int, int]]]:
    edges = []
    stack = [(tree, 0)]
    count = 1
    while stack:
        node, idx = stack.pop()
        for child in node.children:
            edges.append((idx, count))
            stack.append((child, count))
            count += 1
    return count, edges


def independent_set_profile(n: int) -> dict[int, int]:
    """Pairs (plane tree on n vertices, independent vertex set of size j), by j."""
    _check(1, n, oracle_cap(PLANE_CAP))
    profile: Counter = Counter()
    for tree in enumerate_kplane(1, n):
        size, edges = _vertices_and_edges(tree)
        for mask in range(1 << size):
            if all(not (mask >> a & 1 and mask >> b & 1) for a, b in edges):
                profile[bin(mask).count("1")] += 1
    return dict(sorted(profile.items()))
