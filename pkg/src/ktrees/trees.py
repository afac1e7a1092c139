"""Tree representations, label rules and text/JSON encodings.

Plane trees use the grammar ``tree := LABEL [ '(' tree {',' tree} ')' ]``;
whitespace between tokens is ignored.  Noncrossing trees are stored as a label
vector over the circular positions 1..n plus an explicit edge set.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from .errors import InvalidParams, ParseError


@dataclass(frozen=True)
class LabelComposition:
    k: int
    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(self.counts))
        if self.k < 1:
            raise InvalidParams("k must be >= 1")
        if len(self.counts) != self.k:
            raise InvalidParams(f"expected {self.k} label counts, got {len(self.counts)}")
        if any(c < 0 for c in self.counts):
            raise InvalidParams("label counts must be nonnegative")
        if sum(self.counts) < 1:
            raise InvalidParams("a tree has at least one vertex")

    @property
    def n(self) -> int:
        return sum(self.counts)

    def __getitem__(self, i: int) -> int:
        """1-based access: ``comp[i]`` is the number of vertices labelled i."""
        if not 1 <= i <= self.k:
            raise IndexError(i)
        return self.counts[i - 1]


def compositions(k: int, n: int) -> Iterator[LabelComposition]:
    """All label compositions of ``n`` into ``k`` parts, in lexicographic order."""
    def rec(parts: int, total: int) -> Iterator[tuple[int, ...]]:
        if parts == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in rec(parts - 1, total - first):
                yield (first,) + rest

    for counts in rec(k, n):
        yield LabelComposition(k, counts)


# ---------------------------------------------------------------------------
# plane trees

@dataclass(frozen=True)
class PlaneTree:
    label: int
    children: tuple["PlaneTree", ...] = ()

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def labels(self) -> Iterator[int]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node.label
            stack.extend(node.children)

    def __str__(self) -> str:
        return render_plane(self)


def validate_plane(tree: PlaneTree, k: int) -> bool:
    stack = [tree]
    while stack:
        node = stack.pop()
        if not 1 <= node.label <= k:
            return False
        for child in node.children:
            if node.label + child.label > k + 1:
                return False
            stack.append(child)
    return True


def render_plane(tree: PlaneTree) -> str:
    if not tree.children:
        return str(tree.label)
    return f"{tree.label}({','.join(render_plane(c) for c in tree.children)})"


def parse_plane(text: str) -> PlaneTree:
    parser = _PlaneParser(text)
    tree = parser.tree()
    parser.skip_ws()
    if parser.pos != len(text):
        raise ParseError(f"unexpected {text[parser.pos]!r}", parser.pos)
    return tree


class _PlaneParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def tree(self) -> PlaneTree:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            what = repr(self.text[self.pos]) if self.pos < len(self.text) else "end of input"
            raise ParseError(f"expected a label, found {what}", self.pos)
        label = int(self.text[start:self.pos])
        if label < 1:
            raise ParseError("labels must be positive", start)
        if self.peek() != "(":
            return PlaneTree(label)
        self.pos += 1
        children = [self.tree()]
        while True:
            c = self.peek()
            if c == ",":
                self.pos += 1
                children.append(self.tree())
            elif c == ")":
                self.pos += 1
                return PlaneTree(label, tuple(children))
            else:
                what = repr(c) if c else "end of input"
                raise ParseError(f"expected ',' or ')', found {what}", self.pos)


# ---------------------------------------------------------------------------
# noncrossing trees

Edge = tuple[int, int]


@dataclass(frozen=True)
class NoncrossingTree:
    labels: tuple[int, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        edges = tuple(sorted((min(a, b), max(a, b)) for a, b in self.edges))
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "edges", edges)

    @property
    def n(self) -> int:
        return len(self.labels)


def crosses(e: Edge, f: Edge) -> bool:
    (a, b), (c, d) = sorted([e, f])
    return a < c < b < d


def is_noncrossing(edges: Sequence[Edge]) -> bool:
    return not any(crosses(edges[i], edges[j])
                   for i in range(len(edges)) for j in range(i + 1, len(edges)))


def rooted_orientation(n: int, edges: Sequence[Edge]) -> list[Edge] | None:
    """Orient the edges away from vertex 1 by BFS.

    Returns ``(parent, child)`` pairs, or None if the edges do not form a
    spanning tree on 1..n.
    """
    if len(edges) != n - 1:
        return None
    adj: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
    for a, b in edges:
        if a not in adj or b not in adj or a == b:
            return None
        adj[a].append(b)
        adj[b].append(a)
    seen = {1}
    out = []
    queue = deque([1])
    while queue:
        v = queue.popleft()
        for w in sorted(adj[v]):
            if w not in seen:
                seen.add(w)
                out.append((v, w))
                queue.append(w)
    return out if len(seen) == n else None


def constrained_edges(n: int, edges: Sequence[Edge]) -> list[Edge]:
    """Oriented edges subject to the label-sum rule (parent index < child index)."""
    oriented = rooted_orientation(n, edges)
    if oriented is None:
        raise InvalidParams("edges do not form a tree on 1..n")
    return [(p, c) for p, c in oriented if p < c]


def edge_ok(parent_label: int, child_label: int, parent: int, child: int, k: int) -> bool:
    """Label check for one oriented edge; edges descending in index are exempt."""
    return parent > child or parent_label + child_label <= k + 1


def validate_noncrossing(tree: NoncrossingTree, k: int) -> bool:
    n = tree.n
    if n < 1 or any(not 1 <= lab <= k for lab in tree.labels):
        return False
    oriented = rooted_orientation(n, tree.edges)
    if oriented is None or not is_noncrossing(tree.edges):
        return False
    lab = tree.labels
    return all(edge_ok(lab[p - 1], lab[c - 1], p, c, k) for p, c in oriented)


def root_label(tree: Union[PlaneTree, NoncrossingTree]) -> int:
    if isinstance(tree, PlaneTree):
        return tree.label
    return tree.labels[0]


def histogram(tree: Union[PlaneTree, NoncrossingTree], k: int) -> LabelComposition:
    counts = [0] * k
    labels = tree.labels() if isinstance(tree, PlaneTree) else tree.labels
    for lab in labels:
        counts[lab - 1] += 1
    return LabelComposition(k, tuple(counts))


def noncrossing_to_json(tree: NoncrossingTree, k: int) -> str:
    return json.dumps({"k": k, "labels": list(tree.labels),
                       "edges": [list(e) for e in tree.edges]})


def noncrossing_from_json(text: str) -> tuple[int, NoncrossingTree]:
    """Parse ``{"k": int, "labels": [...], "edges": [[a, b], ...]}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.pos) from None
    if not isinstance(doc, dict) or set(doc) != {"k", "labels", "edges"}:
        raise ParseError("expected an object with keys k, labels, edges", 0)
    k, labels, edges = doc["k"], doc["labels"], doc["edges"]
    if not isinstance(k, int) or not all(isinstance(x, int) for x in labels):
        raise ParseError("k and labels must be integers", 0)
    for e in edges:
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(v, int) for v in e)
                and 1 <= e[0] < e[1] <= len(labels)):
            raise ParseError(f"bad edge {e!r}: need [a, b] with 1 <= a < b <= n", 0)
    return k, NoncrossingTree(tuple(labels), tuple(tuple(e) for e in edges))
