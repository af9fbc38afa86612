import itertools
import json
import random
from pathlib import Path
from typing import Dict

import numpy as np
import pytest

from test_utils import cyclic_square, naive_is_latin

from hamendo.endomorphisms import decompose, is_endomorphism
from hamendo.error import InvalidParamsError, LimitExceededError, StructureError
from hamendo.hamming import GraphParams, Layer, encode
from hamendo.latin import (
    ConstructionSpec,
    LatinHypercube,
    LatinHypercuboid,
    build_endomorphism,
    count_cubes,
    count_cuboids,
    count_table,
    cube_catalogue,
    enumerate_construction_specs,
    enumerate_cubes,
    enumerate_cuboids,
    load_cube,
    random_construction_spec,
    validate_cube,
    validate_cuboid,
)
from hamendo.limits import Limits
from hamendo.maps import EndoMap


def test_cube_table_order_three() -> None:
    assert count_table(4, 3) == {1: 6, 2: 12, 3: 24, 4: 48}


@pytest.mark.parametrize(
    "d,n,k,expected",
    [
        (1, 4, 1, 24),
        (2, 2, 1, 2),
        (2, 4, 1, 576),
        (2, 2, 2, 24),
        (3, 2, 1, 2),
    ],
)
def test_count_cubes(d: int, n: int, k: int, expected: int) -> None:
    assert count_cubes(d, n, k) == expected


def test_count_cubes_parallel_matches() -> None:
    assert count_cubes(3, 3, 1, jobs=2) == count_cubes(3, 3, 1, jobs=1) == 24


def test_enumerated_squares_are_latin() -> None:
    squares = list(enumerate_cubes(2, 3))
    assert len(squares) == 12
    assert len(set(squares)) == 12
    for square in squares:
        assert validate_cube(square) == (True, None)
        assert naive_is_latin(square.cells, 1)
    # lexicographic order
    keys = [square.key() for square in squares]
    assert keys == sorted(keys)


def test_enumerated_class_two_cubes_are_latin() -> None:
    cubes = list(enumerate_cubes(3, 2, 2))
    assert cubes
    for cube in cubes:
        assert cube.symbols == 4
        assert validate_cube(cube)[0]
        assert naive_is_latin(cube.cells, 2)


def test_validate_cube() -> None:
    assert validate_cube(LatinHypercube(2, 3, 1, cyclic_square(3)))[0]

    bad = cyclic_square(3)
    bad[0, 0], bad[0, 1] = bad[0, 1], bad[0, 0]
    valid, violation = validate_cube(LatinHypercube(2, 3, 1, bad))
    assert not valid
    assert violation is not None and violation.reason == "repeats"

    out_of_range = cyclic_square(3)
    out_of_range[2, 2] = 3
    assert not validate_cube(LatinHypercube(2, 3, 1, out_of_range))[0]

    with pytest.raises(StructureError):
        validate_cube(LatinHypercube(2, 3, 1, np.zeros((3, 2), dtype=np.int64)))
    with pytest.raises(StructureError):
        validate_cube(LatinHypercube(2, 3, 3, cyclic_square(3)))


def test_latin_rectangles() -> None:
    rectangles = list(enumerate_cuboids((3, 2)))
    assert len(rectangles) == 12
    for rectangle in rectangles:
        assert rectangle.sides == (3, 2)
        assert validate_cuboid(rectangle)[0]
        assert naive_is_latin(rectangle.cells, 1)
    assert count_cuboids((2, 3)) == 12
    assert count_cuboids((4, 2)) == 4 * 3 * 2 * 9


def test_cuboid_count_ignores_side_order() -> None:
    expected = count_cuboids((3, 3, 2))
    assert expected > 0
    for sides in itertools.permutations((3, 3, 2)):
        assert count_cuboids(sides) == expected


def test_validate_cube_agrees_with_naive_checker() -> None:
    rng = np.random.default_rng(3)
    for d, n, k in [(2, 3, 1), (3, 3, 1), (2, 4, 1), (2, 2, 2), (3, 2, 2)]:
        cubes = list(enumerate_cubes(d, n, k))
        assert cubes
        for _ in range(40):
            cells = rng.integers(0, n**k, size=(n,) * d)
            assert validate_cube(LatinHypercube(d, n, k, cells))[0] == naive_is_latin(cells, k)
        for cube in cubes[:20]:
            assert validate_cube(cube)[0] and naive_is_latin(cube.cells, k)
            # one swap of two cells usually breaks a layer, not always
            cells = cube.cells.copy().ravel()
            a, b = rng.choice(cells.size, size=2, replace=False)
            cells[a], cells[b] = cells[b], cells[a]
            cells = cells.reshape(cube.cells.shape)
            assert validate_cube(LatinHypercube(d, n, k, cells))[0] == naive_is_latin(cells, k)


def test_validate_cuboid_rejects() -> None:
    with pytest.raises(StructureError):
        validate_cuboid(LatinHypercuboid((2, 3), 1, np.zeros((2, 3), dtype=np.int64)))
    repeated = LatinHypercuboid((3, 2), 1, np.array([[0, 1], [0, 2], [2, 0]]))
    assert not validate_cuboid(repeated)[0]


def test_cube_parameters_rejected() -> None:
    with pytest.raises(InvalidParamsError):
        count_cubes(2, 3, 3)
    with pytest.raises(InvalidParamsError):
        count_cubes(0, 3)
    with pytest.raises(InvalidParamsError):
        count_cuboids((3, 1))


def test_cube_enumeration_limits() -> None:
    with pytest.raises(LimitExceededError):
        list(enumerate_cubes(2, 4, 1, Limits(max_results=10)))
    with pytest.raises(LimitExceededError):
        count_cubes(2, 4, 1, Limits(max_nodes=20))


def test_load_cube(tmp_path: Path) -> None:
    cube_path = tmp_path / "cyclic.json"
    cube_path.write_text(json.dumps({"dim": 2, "order": 3, "class": 1, "cells": cyclic_square(3).tolist()}))
    cube = load_cube(cube_path)
    assert cube == LatinHypercube(2, 3, 1, cyclic_square(3))
    assert cube.to_dict()["cells"] == [[0, 1, 2], [1, 2, 0], [2, 0, 1]]


@pytest.mark.parametrize(
    "data",
    [
        [[0, 1], [1, 0]],
        {"order": 2, "cells": [[0, 1], [1, 0]]},
        {"dim": 2, "order": 2},
        {"dim": 2, "order": 2, "cells": [[0, 1], [1]]},
        {"dim": 2, "order": 2, "cells": [[0, 1], [1, 0], [0, 1]]},
        {"dim": 2, "order": 2, "cells": [[0, 1.9], [1, 0]]},
        {"dim": 2, "order": 2, "cells": [[0, True], [1, 0]]},
        {"dim": 2, "order": 2, "cells": [[0, "1"], [1, 0]]},
        {"dim": 2, "order": 2, "cells": [0, 1, 1, 0]},
        {"dim": 2.0, "order": 2, "cells": [[0, 1], [1, 0]]},
        {"dim": 2, "order": 2, "class": 3, "cells": [[0, 1], [1, 0]]},
    ],
)
def test_cube_from_dict_rejects_malformed(data: object) -> None:
    with pytest.raises(InvalidParamsError):
        LatinHypercube.from_dict(data)


def test_load_cube_rejects_invalid_json(tmp_path: Path) -> None:
    cube_path = tmp_path / "broken.json"
    cube_path.write_text('{"dim": 2, "order": ')
    with pytest.raises(InvalidParamsError):
        load_cube(cube_path)


def test_build_cyclic_square_endomorphism() -> None:
    params = GraphParams.hamming(2, 3)
    spec = ConstructionSpec(
        Layer(frozenset({0}), ((1, 0),)),
        (frozenset({0, 1}),),
        (LatinHypercube(2, 3, 1, cyclic_square(3)),),
        (0,),
    )
    f = build_endomorphism(params, spec)
    for x in range(3):
        for y in range(3):
            assert f.images[encode(params, (x, y))] == encode(params, ((x + y) % 3, 0))
    assert is_endomorphism(params, f)
    assert f.rank == 3


def test_construction_spec_rejects() -> None:
    params = GraphParams.hamming(2, 3)
    square = LatinHypercube(2, 3, 1, cyclic_square(3))
    with pytest.raises(StructureError):
        # matching points at a fixed coordinate of the layer
        build_endomorphism(
            params, ConstructionSpec(Layer(frozenset({0}), ((1, 0),)), (frozenset({0, 1}),), (square,), (1,))
        )
    with pytest.raises(StructureError):
        build_endomorphism(
            params, ConstructionSpec(Layer(frozenset({0}), ((1, 0),)), (frozenset({0}),), (square,), (0,))
        )
    with pytest.raises(StructureError):
        # coordinate 2 is neither free nor fixed
        build_endomorphism(
            params, ConstructionSpec(Layer(frozenset({0}), ()), (frozenset({0, 1}),), (square,), (0,))
        )
    with pytest.raises(StructureError):
        build_endomorphism(
            params, ConstructionSpec(Layer(frozenset({0}), ((1, 3),)), (frozenset({0, 1}),), (square,), (0,))
        )


def test_construction_specs_give_distinct_endomorphisms() -> None:
    params = GraphParams.hamming(2, 3)
    maps = {build_endomorphism(params, spec) for spec in enumerate_construction_specs(params, 1)}
    assert len(maps) == 72
    assert all(is_endomorphism(params, f) and f.rank == 3 for f in maps)


def test_random_construction_spec() -> None:
    params = GraphParams.hamming(3, 3)
    catalogue = cube_catalogue(3, 3)
    rng = random.Random(7)
    for _ in range(20):
        k = rng.choice([1, 2])
        f = build_endomorphism(params, random_construction_spec(params, k, rng, catalogue))
        assert is_endomorphism(params, f)
        assert f.rank == 3**k


def test_sampled_specs_round_trip() -> None:
    params = GraphParams.hamming(3, 3)
    catalogue = cube_catalogue(3, 3)
    rng = random.Random(0)
    maps: Dict[ConstructionSpec, EndoMap] = {}
    for _ in range(500):
        spec = random_construction_spec(params, rng.choice([1, 2]), rng, catalogue)
        f = build_endomorphism(params, spec)
        assert decompose(params, f) == spec
        maps[spec] = f
    assert len(set(maps.values())) == len(maps)


def test_every_spec_gives_its_own_map() -> None:
    params = GraphParams.hamming(3, 3)
    catalogue = cube_catalogue(3, 3)
    by_rank: Dict[int, int] = {}
    for k in (1, 2):
        specs = list(enumerate_construction_specs(params, k, catalogue))
        by_rank[3**k] = len({build_endomorphism(params, spec) for spec in specs})
        assert by_rank[3**k] == len(specs)
    assert by_rank == {3: 648, 9: 3888}
    assert sum(by_rank.values()) == 4536
