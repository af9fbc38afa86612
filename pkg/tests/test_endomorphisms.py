import random

import pytest

from test_utils import brute_force_endomorphisms, cyclic_square, naive_is_latin, rank_histogram

from hamendo.cliques import complement_colouring_data
from hamendo.endomorphisms import (
    EndomorphismSearch,
    SearchMode,
    SearchOptions,
    VertexOrder,
    analyze,
    build_colouring,
    collapses_kernel_into,
    count_endomorphisms,
    decompose,
    enumerate_endomorphisms,
    is_endomorphism,
    preimage_array,
    sample_colourings,
    search_order,
)
from hamendo.error import InvalidParamsError, LimitExceededError, NotAnEndomorphismError
from hamendo.hamming import GraphParams, Layer, adjacency_masks, encode
from hamendo.latin import ConstructionSpec, LatinHypercube, build_endomorphism, cube_catalogue, random_construction_spec
from hamendo.limits import Limits
from hamendo.maps import EndoMap, kernel_partition


def cyclic_map(params: GraphParams) -> EndoMap:
    spec = ConstructionSpec(
        Layer(frozenset({0}), ((1, 0),)),
        (frozenset({0, 1}),),
        (LatinHypercube(2, 3, 1, cyclic_square(3)),),
        (0,),
    )
    return build_endomorphism(params, spec)


def test_is_endomorphism() -> None:
    params = GraphParams.hamming(2, 3)
    assert is_endomorphism(params, EndoMap.identity(params))
    assert not is_endomorphism(params, EndoMap.of([0] * 9))
    assert is_endomorphism(params, cyclic_map(params))
    with pytest.raises(InvalidParamsError):
        is_endomorphism(params, EndoMap.of([0] * 8))
    with pytest.raises(InvalidParamsError):
        is_endomorphism(params, EndoMap.of([9] * 9))


def test_analyze() -> None:
    params = GraphParams.hamming(2, 3)
    analysis = analyze(params, cyclic_map(params))
    assert analysis.rank == 3
    assert analysis.uniform
    assert analysis.layer_dim == 1
    assert analysis.class_sizes == (3, 3, 3)
    assert analysis.to_dict() == {"rank": 3, "uniform": True, "image_layer": {"free": [1], "fixed": {"2": 0}}}

    identity = analyze(params, EndoMap.identity(params))
    assert identity.rank == 9
    assert identity.layer_dim == 2

    with pytest.raises(NotAnEndomorphismError):
        analyze(params, EndoMap.of([0] * 9))


def test_search_order() -> None:
    masks = adjacency_masks(GraphParams.hamming(2, 3))
    order = search_order(masks)
    assert sorted(order) == list(range(9))
    assert order[0] == 0
    assert order[1] == 1
    assert search_order(masks, VertexOrder.NATURAL) == list(range(9))


def test_square_lattice_counts() -> None:
    params = GraphParams.hamming(2, 3)
    assert count_endomorphisms(params).by_rank == {3: 72, 9: 72}
    singular = SearchOptions(singular_only=True)
    assert count_endomorphisms(params, singular).total == 72
    assert count_endomorphisms(params, SearchOptions(singular_only=True, use_symmetry=True)).total == 72
    assert count_endomorphisms(params, SearchOptions(vertex_order=VertexOrder.NATURAL)).total == 144
    assert count_endomorphisms(params, singular, jobs=2).by_rank == {3: 72}


@pytest.mark.parametrize("text", ["2x2", "3x2", "2x2:S=2", "3x2:S=2"])
def test_search_matches_brute_force(text: str) -> None:
    params = GraphParams.from_text(text)
    expected = set(brute_force_endomorphisms(params))
    found = [f.images for f in enumerate_endomorphisms(params, SearchOptions(mode=SearchMode.ENUMERATE))]
    assert len(found) == len(set(found))
    assert set(found) == expected
    assert count_endomorphisms(params).by_rank == rank_histogram(list(expected))


def test_rectangle_singular_maps() -> None:
    params = GraphParams.cuboid((3, 2))
    maps = list(enumerate_endomorphisms(params, SearchOptions(singular_only=True, mode=SearchMode.ENUMERATE)))
    assert len(maps) == 24
    assert {f.rank for f in maps} == {3}
    for f in maps:
        array = preimage_array(params, f)
        assert array is not None
        assert naive_is_latin(array, 1)


@pytest.mark.slow
def test_cube_lattice_histogram() -> None:
    params = GraphParams.hamming(3, 3)
    tally = count_endomorphisms(params, SearchOptions(singular_only=True, use_symmetry=True), jobs=2)
    assert tally.by_rank == {3: 648, 9: 3888}
    options = SearchOptions(rank_filter=frozenset({9}), singular_only=True, use_symmetry=True)
    assert count_endomorphisms(params, options, jobs=2).by_rank == {9: 3888}


def test_rank_filter() -> None:
    params = GraphParams.hamming(2, 3)
    assert count_endomorphisms(params, SearchOptions(rank_filter=frozenset({3}))).by_rank == {3: 72}
    assert count_endomorphisms(params, SearchOptions(rank_filter=frozenset({4, 5}))).total == 0
    with pytest.raises(InvalidParamsError):
        SearchOptions(rank_filter=frozenset())
    with pytest.raises(InvalidParamsError):
        SearchOptions(cap=0)


def test_cap_marks_partial() -> None:
    params = GraphParams.hamming(2, 3)
    search = EndomorphismSearch(params, SearchOptions(singular_only=True, mode=SearchMode.ENUMERATE, cap=5))
    maps = list(search.stream())
    assert len(maps) == 5
    assert search.tally.partial
    assert search.tally.total == 5

    search = EndomorphismSearch(params, SearchOptions(singular_only=True, mode=SearchMode.ENUMERATE, cap=100))
    assert len(list(search.stream())) == 72
    assert not search.tally.partial


def test_search_limits() -> None:
    params = GraphParams.hamming(2, 3)
    with pytest.raises(LimitExceededError) as e:
        list(enumerate_endomorphisms(params, limits=Limits(max_results=3)))
    assert e.value.limit == "max_results"
    with pytest.raises(LimitExceededError):
        EndomorphismSearch(params, limits=Limits(max_search_vertices=4))
    with pytest.raises(LimitExceededError):
        count_endomorphisms(params, limits=Limits(max_nodes=10))


def test_decompose_rebuilds_every_singular_map() -> None:
    params = GraphParams.hamming(2, 3)
    for f in enumerate_endomorphisms(params, SearchOptions(singular_only=True, mode=SearchMode.ENUMERATE)):
        spec = decompose(params, f)
        assert build_endomorphism(params, spec) == f
        assert len(spec.parts) == 1


def test_decompose_random_cube_maps() -> None:
    params = GraphParams.hamming(3, 3)
    catalogue = cube_catalogue(3, 3)
    rng = random.Random(11)
    for _ in range(10):
        k = rng.choice([1, 2])
        f = build_endomorphism(params, random_construction_spec(params, k, rng, catalogue))
        spec = decompose(params, f)
        assert build_endomorphism(params, spec) == f
        assert len(spec.parts) == k


def test_decompose_rejects() -> None:
    params = GraphParams.hamming(2, 3)
    with pytest.raises(InvalidParamsError):
        decompose(params, EndoMap.identity(params))
    with pytest.raises(NotAnEndomorphismError):
        decompose(params, EndoMap.of([0] * 9))
    with pytest.raises(InvalidParamsError):
        decompose(GraphParams.hamming(2, 3, (2,)), EndoMap.identity(params))


def test_preimage_array() -> None:
    params = GraphParams.hamming(2, 3)
    array = preimage_array(params, cyclic_map(params))
    assert array is not None
    assert (array == cyclic_square(3)).all()

    rng = random.Random(5)
    cube_params = GraphParams.hamming(3, 3)
    f = build_endomorphism(cube_params, random_construction_spec(cube_params, 1, rng, cube_catalogue(3, 3)))
    array = preimage_array(cube_params, f)
    assert array is not None and array.shape == (3, 3, 3)
    assert naive_is_latin(array, 1)

    off_layer = EndoMap.of([0, encode(params, (1, 1))] * 4 + [0])
    assert preimage_array(params, off_layer) is None


def test_build_colouring() -> None:
    params = GraphParams.hamming(2, 3, (2,))
    rows = [frozenset({0, 1, 2}), frozenset({3, 4, 5}), frozenset({6, 7, 8})]
    f = build_colouring(params, rows, [0, 4, 8])
    assert f.images == (0, 0, 0, 4, 4, 4, 8, 8, 8)
    assert is_endomorphism(params, f)
    assert collapses_kernel_into(kernel_partition(f), rows)

    with pytest.raises(InvalidParamsError):
        build_colouring(params, rows, [0, 4])
    with pytest.raises(InvalidParamsError):
        build_colouring(params, rows[:2] + [frozenset({5, 6, 7, 8})], [0, 4, 8])
    with pytest.raises(InvalidParamsError):
        build_colouring(params, rows[:2], [0, 4])


@pytest.mark.parametrize("text,rank", [("3x3:S=2", 3), ("3x3x3:S=1,2", 9), ("3x3x3:S=2,3", 9)])
def test_sample_colourings(text: str, rank: int) -> None:
    params = GraphParams.from_text(text)
    partitions, _ = complement_colouring_data(params)
    rng = random.Random(42)
    for f in sample_colourings(params, 200, rng):
        assert is_endomorphism(params, f)
        assert f.rank == rank
        assert any(collapses_kernel_into(kernel_partition(f), blocks) for blocks in partitions)


def test_sample_colourings_are_seeded() -> None:
    params = GraphParams.hamming(3, 3, (2, 3))
    first = list(sample_colourings(params, 20, random.Random(1)))
    second = list(sample_colourings(params, 20, random.Random(1)))
    assert first == second


def test_node_limit_covers_the_whole_run() -> None:
    params = GraphParams.hamming(2, 3)
    options = SearchOptions(singular_only=True)
    search = EndomorphismSearch(params, options)
    per_root = [search.count_root(root)[1] for root in range(9)]
    assert sum(per_root) > max(per_root) + 1

    # every root branch fits, the run as a whole does not
    limits = Limits(max_nodes=max(per_root) + 1)
    with pytest.raises(LimitExceededError) as e:
        count_endomorphisms(params, options, limits)
    assert e.value.limit == "max_nodes"
    with pytest.raises(LimitExceededError):
        count_endomorphisms(params, options, limits, jobs=2)

    assert count_endomorphisms(params, options, Limits(max_nodes=sum(per_root))).total == 72
