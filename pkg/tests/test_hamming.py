import pytest

from test_utils import naive_edges, naive_tuples

from hamendo.error import InvalidParamsError
from hamendo.hamming import (
    GraphParams,
    Layer,
    adjacency_masks,
    adjacent,
    as_layer,
    decode,
    edge_count,
    encode,
    enumerate_layers,
    layer_count,
    layer_system_of,
    layer_vertices,
    minimal_layer_containing,
    neighbours,
    popcount,
    vertex_tuples,
)


def test_text_form() -> None:
    params = GraphParams.from_text("3x3x3:S=1,2")
    assert params.sides == (3, 3, 3)
    assert params.distances == frozenset({1, 2})
    assert params.to_text() == "3x3x3:S=1,2"

    assert GraphParams.from_text("3x2") == GraphParams.cuboid((3, 2))
    assert GraphParams.from_text(" 4x4 : S = 2 ") == GraphParams.hamming(2, 4, (2,))


@pytest.mark.parametrize(
    "text",
    ["", "3x", "abc", "3x3:S=", "3x3:S=3", "3x3:S=0", "3x1", "2x2x2x2?", "3x3:T=1"],
)
def test_text_form_rejects(text: str) -> None:
    with pytest.raises(InvalidParamsError):
        GraphParams.from_text(text)


def test_params_validation() -> None:
    with pytest.raises(InvalidParamsError):
        GraphParams((), frozenset({1}))
    with pytest.raises(InvalidParamsError):
        GraphParams((3, 3), frozenset())
    with pytest.raises(InvalidParamsError):
        GraphParams.hamming(2, 3, (1, 2)).complement()
    with pytest.raises(InvalidParamsError):
        GraphParams.cuboid((3, 2)).n


def test_complement_and_normalized() -> None:
    assert GraphParams.hamming(3, 3).complement() == GraphParams.hamming(3, 3, (2, 3))
    assert GraphParams.hamming(3, 3, (3,)).complement() == GraphParams.hamming(3, 3, (1, 2))

    normalized, perm = GraphParams.cuboid((2, 4, 3)).normalized()
    assert normalized.sides == (4, 3, 2)
    assert perm == (1, 2, 0)


def test_encode_decode() -> None:
    params = GraphParams.cuboid((3, 2))
    assert params.radix == (2, 1)
    assert encode(params, (2, 1)) == 5
    assert decode(params, 5) == (2, 1)
    assert [decode(params, v) for v in range(params.vertex_count)] == naive_tuples(params)
    assert [tuple(row) for row in vertex_tuples(params).tolist()] == naive_tuples(params)

    with pytest.raises(InvalidParamsError):
        encode(params, (3, 0))
    with pytest.raises(InvalidParamsError):
        encode(params, (1,))
    with pytest.raises(InvalidParamsError):
        decode(params, 6)


@pytest.mark.parametrize("text", ["3x3", "3x3:S=2", "3x3x3:S=1,2", "3x3x3:S=3", "3x2", "4x3x2:S=1,3"])
def test_adjacency_matches_distances(text: str) -> None:
    params = GraphParams.from_text(text)
    edges = set(naive_edges(params))
    masks = adjacency_masks(params)
    for a in range(params.vertex_count):
        for b in range(params.vertex_count):
            expected = (min(a, b), max(a, b)) in edges
            assert bool((masks[a] >> b) & 1) == expected
            assert adjacent(params, a, b) == expected
    assert edge_count(params) == len(edges)


def test_degrees() -> None:
    params = GraphParams.hamming(3, 3)
    assert {popcount(mask) for mask in adjacency_masks(params)} == {6}
    assert edge_count(params) == 81
    assert neighbours(params, 0) == [1, 2, 3, 6, 9, 18]


def test_layer_counts() -> None:
    params = GraphParams.hamming(3, 3)
    assert [layer_count(params, k) for k in range(4)] == [27, 27, 9, 1]
    assert layer_count(GraphParams.cuboid((3, 2)), 1) == 5
    for k in range(4):
        assert len(list(enumerate_layers(params, k))) == layer_count(params, k)
    with pytest.raises(InvalidParamsError):
        layer_count(params, 4)


def test_layer_vertices() -> None:
    params = GraphParams.hamming(2, 3)
    row = Layer(frozenset({1}), ((0, 2),))
    assert layer_vertices(params, row) == frozenset({6, 7, 8})
    assert as_layer(params, {6, 7, 8}) == row
    assert as_layer(params, {0, 4}) is None
    assert minimal_layer_containing(params, {0, 4}).dimension == 2

    system = layer_system_of(params, row)
    assert len(system.members) == 3
    assert frozenset().union(*(layer_vertices(params, member) for member in system.members)) == frozenset(range(9))

    assert Layer.from_dict(row.to_dict()) == row
    assert row.to_dict() == {"free": [2], "fixed": {"1": 2}}

    with pytest.raises(InvalidParamsError):
        layer_vertices(params, Layer(frozenset({0}), ((0, 1),)))
    with pytest.raises(InvalidParamsError):
        as_layer(params, [])
