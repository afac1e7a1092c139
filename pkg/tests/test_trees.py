import json

import pytest
from hypothesis import given, strategies as st

from ktrees.errors import InvalidParams, ParseError
from ktrees.trees import (
    LabelComposition,
    NoncrossingTree,
    PlaneTree,
    compositions,
    constrained_edges,
    crosses,
    edge_ok,
    histogram,
    noncrossing_from_json,
    noncrossing_to_json,
    parse_plane,
    render_plane,
    rooted_orientation,
    validate_noncrossing,
    validate_plane,
)

# a 19-vertex 4-plane tree (children left to right) with every label present
BIG_PLANE = "2(3(1(4,2(3),4,3(1(2,4)))),1,2(3,2(1(4(1),3))))"

# 3-noncrossing tree on v1..v12 that needs the descending-edge exemption twice
BIG_NC = NoncrossingTree(
    (2, 3, 1, 2, 2, 1, 3, 2, 1, 3, 1, 3),
    ((1, 4), (1, 8), (1, 11), (2, 3), (2, 4), (5, 6), (5, 8), (7, 8), (8, 9), (9, 10), (11, 12)),
)


def test_big_plane_tree():
    tree = parse_plane(BIG_PLANE)
    assert tree.size() == 19
    assert validate_plane(tree, 4)
    assert not validate_plane(tree, 3)
    comp = histogram(tree, 4)
    assert comp.counts == (5, 5, 5, 4)
    assert comp.n == 19


def test_big_noncrossing_tree():
    assert validate_noncrossing(BIG_NC, 3)
    assert histogram(BIG_NC, 3).counts == (4, 4, 4)
    oriented = rooted_orientation(12, BIG_NC.edges)
    exempt = [(p, c) for p, c in oriented if p > c]
    lab = BIG_NC.labels
    # the two label-(2,3) edges are only allowed because they descend in index
    bad_sums = [(p, c) for p, c in exempt if lab[p - 1] + lab[c - 1] > 4]
    assert sorted(bad_sums) == [(4, 2), (8, 7)]


def test_validate_plane_small():
    assert not validate_plane(PlaneTree(2, (PlaneTree(2),)), 2)
    assert validate_plane(PlaneTree(1), 1)
    assert not validate_plane(PlaneTree(3), 2)


def test_validate_noncrossing_small():
    assert validate_noncrossing(NoncrossingTree((1, 2), ((1, 2),)), 2)
    # path 1-3-4-2 contains the crossing pair {1,3}, {2,4}
    path = NoncrossingTree((1, 1, 1, 1), ((1, 3), (2, 4), (3, 4)))
    assert crosses((1, 3), (2, 4))
    assert not validate_noncrossing(path, 1)
    star = NoncrossingTree((1, 1, 1, 1), ((1, 2), (1, 3), (1, 4)))
    assert validate_noncrossing(star, 1)
    # not a tree
    assert not validate_noncrossing(NoncrossingTree((1, 1, 1), ((1, 2),)), 1)


def test_noncrossing_orientation_rule():
    # root v1 -> v3 -> v2: edge {2,3} descends in index and is exempt
    tree = NoncrossingTree((1, 2, 2), ((1, 3), (2, 3)))
    assert constrained_edges(3, tree.edges) == [(1, 3)]
    assert validate_noncrossing(tree, 2)
    # root v1 -> v2 -> v3: edge {2,3} ascends and must obey the rule
    tree = NoncrossingTree((1, 2, 2), ((1, 2), (2, 3)))
    assert not validate_noncrossing(tree, 2)


def test_exempt_edges_accept_any_labels():
    oriented = rooted_orientation(12, BIG_NC.edges)
    for p, c in oriented:
        if p > c:
            assert edge_ok(3, 3, p, c, 3)
        else:
            assert not edge_ok(3, 3, p, c, 3)


@pytest.mark.parametrize("text, expected", [
    ("1(1,1)", PlaneTree(1, (PlaneTree(1), PlaneTree(1)))),
    ("2(3(1),1)", PlaneTree(2, (PlaneTree(3, (PlaneTree(1),)), PlaneTree(1)))),
    ("7", PlaneTree(7)),
    (" 1 ( 2 , 1 ) ", PlaneTree(1, (PlaneTree(2), PlaneTree(1)))),
])
def test_parse_plane(text, expected):
    assert parse_plane(text) == expected


@pytest.mark.parametrize("text, offset", [
    ("2(", 2), ("", 0), ("1(2", 3), ("1()", 2), ("1(2))", 4), ("0", 0), ("a", 0), ("1(2;3)", 3),
])
def test_parse_plane_errors(text, offset):
    with pytest.raises(ParseError) as info:
        parse_plane(text)
    assert info.value.offset == offset


def test_render_round_trip_over_enumeration(oracle):
    for k in range(1, 4):
        for n in range(1, 7):
            for tree in oracle.plane(k, n):
                text = render_plane(tree)
                assert parse_plane(text) == tree
                assert render_plane(parse_plane(text)) == text


@st.composite
def plane_trees(draw, depth=3):
    label = draw(st.integers(1, 9))
    if depth == 0:
        return PlaneTree(label)
    kids = draw(st.lists(plane_trees(depth=depth - 1), max_size=3))
    return PlaneTree(label, tuple(kids))


@given(plane_trees())
def test_render_round_trip_random(tree):
    assert parse_plane(render_plane(tree)) == tree


def test_k1_all_ones_always_valid(oracle):
    for n in range(1, 7):
        for tree in oracle.plane(1, n):
            assert set(tree.labels()) == {1}
            assert validate_plane(tree, 1)
        for tree in oracle.nc(1, n):
            assert validate_noncrossing(tree, 1)


def test_label_composition():
    comp = LabelComposition(3, (2, 0, 1))
    assert comp.n == 3 and comp[1] == 2 and comp[3] == 1
    with pytest.raises(InvalidParams):
        LabelComposition(2, (1,))
    with pytest.raises(InvalidParams):
        LabelComposition(2, (0, 0))
    with pytest.raises(InvalidParams):
        LabelComposition(2, (-1, 2))
    assert [c.counts for c in compositions(2, 2)] == [(0, 2), (1, 1), (2, 0)]
    assert len(list(compositions(4, 5))) == 56


def test_noncrossing_json_round_trip():
    k, tree = noncrossing_from_json(noncrossing_to_json(BIG_NC, 3))
    assert k == 3 and tree == BIG_NC
    doc = json.loads(noncrossing_to_json(BIG_NC, 3))
    assert doc["edges"][0] == [1, 4]


@pytest.mark.parametrize("text", [
    "{", "[]", '{"k": 2, "labels": [1, 2]}', '{"k": 2, "labels": [1, 2], "edges": [[2, 1]]}',
    '{"k": 2, "labels": [1, 2], "edges": [[1, 3]]}', '{"k": "2", "labels": [1], "edges": []}',
])
def test_noncrossing_json_rejects(text):
    with pytest.raises(ParseError):
        noncrossing_from_json(text)
