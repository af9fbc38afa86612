"""
Latin hypercubes and hypercuboids of class k.

A d-dimensional array is Latin of class k when every k-layer (fix all but k
axes) holds pairwise distinct symbols. For a cube of order n this means each
of the n^k symbols occurs exactly once per k-layer; for a hypercuboid of type
n_1 >= ... >= n_d the full-size k-layers hold each of the n_1...n_k symbols
once and the smaller ones at most once. Symbols are the integers
0 .. symbols-1.
"""

import itertools
import json
import logging
import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from hamendo.error import InvalidParamsError, LimitExceededError, StructureError
from hamendo.formulas import set_partitions
from hamendo.hamming import (
    GraphParams,
    Layer,
    check_layer,
    enumerate_layers,
    iter_bits,
    vertex_tuples,
)
from hamendo.limits import Limits, SearchBudget
from hamendo.maps import EndoMap
from hamendo.tools.parallel import split_and_merge

logger = logging.getLogger("hamendo")


def _is_whole(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _whole(data: Dict[str, Any], key: str) -> int:
    value = data.get(key, 1)
    if not _is_whole(value):
        raise InvalidParamsError(f"cube {key} must be an integer, got {value!r}")
    return int(value)


def _integer_array(cells: Any, dim: int, order: int) -> np.ndarray:
    """Checks that ``cells`` nests ``dim`` levels of ``order`` integers each."""

    def walk(node: Any, depth: int) -> None:
        if depth == dim:
            if not _is_whole(node):
                raise InvalidParamsError(f"cube cells must be integers, got {node!r}")
            return
        if not isinstance(node, list) or len(node) != order:
            raise InvalidParamsError(f"cube cells must be {dim} nested lists of length {order}")
        for child in node:
            walk(child, depth + 1)

    walk(cells, 0)
    return np.asarray(cells, dtype=np.int64)


@dataclass(frozen=True)
class LatinHypercube:
    dim: int
    order: int
    k: int
    cells: np.ndarray

    @property
    def symbols(self) -> int:
        return self.order**self.k

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "order": self.order,
            "class": self.k,
            "cells": self.cells.tolist(),
        }

    @staticmethod
    def from_dict(data: Any) -> "LatinHypercube":
        if not isinstance(data, dict):
            raise InvalidParamsError("cube must be an object with dim, order, class and cells")
        missing = [key for key in ("dim", "order", "cells") if key not in data]
        if missing:
            raise InvalidParamsError(f"cube is missing {', '.join(missing)}")
        dim, order, k = (_whole(data, key) for key in ("dim", "order", "class"))
        if dim < 1 or order < 1 or not 1 <= k <= dim:
            raise InvalidParamsError(f"cube needs dim >= 1, order >= 1 and 1 <= class <= dim, got {dim}, {order}, {k}")
        cells = _integer_array(data["cells"], dim, order)
        return LatinHypercube(dim, order, k, cells)

    def key(self) -> Tuple[int, ...]:
        return tuple(int(x) for x in self.cells.ravel())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LatinHypercube):
            return NotImplemented
        return (self.dim, self.order, self.k, self.key()) == (other.dim, other.order, other.k, other.key())

    def __hash__(self) -> int:
        return hash((self.dim, self.order, self.k, self.key()))


@dataclass(frozen=True)
class LatinHypercuboid:
    sides: Tuple[int, ...]
    k: int
    cells: np.ndarray

    @property
    def symbols(self) -> int:
        return math.prod(self.sides[: self.k])

    def key(self) -> Tuple[int, ...]:
        return tuple(int(x) for x in self.cells.ravel())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LatinHypercuboid):
            return NotImplemented
        return (self.sides, self.k, self.key()) == (other.sides, other.k, other.key())

    def __hash__(self) -> int:
        return hash((self.sides, self.k, self.key()))


@dataclass(frozen=True)
class CubeViolation:
    free: Tuple[int, ...]
    fixed: Dict[int, int]
    symbol: int
    reason: str

    def __str__(self) -> str:
        fixed = ", ".join(f"x{i}={v}" for i, v in sorted(self.fixed.items()))
        return f"symbol {self.symbol} {self.reason} in the layer free={list(self.free)} fixed=({fixed})"


def _first_violation(
    cells: np.ndarray, k: int, symbols: int, exact_totals: bool
) -> Optional[CubeViolation]:
    d = cells.ndim
    if cells.size and (cells.min() < 0 or cells.max() >= symbols):
        bad = int(cells[(cells < 0) | (cells >= symbols)].ravel()[0])
        return CubeViolation((), {}, bad, f"is outside 0..{symbols - 1}")

    for free in itertools.combinations(range(d), k):
        others = [i for i in range(d) if i not in free]
        moved = np.moveaxis(cells, free, range(d - k, d))
        rows = moved.reshape(-1, math.prod(cells.shape[i] for i in free))
        ordered = np.sort(rows, axis=1)
        repeats = ordered[:, 1:] == ordered[:, :-1]
        if repeats.any():
            row, column = np.argwhere(repeats)[0]
            position = np.unravel_index(row, [cells.shape[i] for i in others])
            return CubeViolation(
                tuple(i + 1 for i in free),
                {others[j] + 1: int(position[j]) for j in range(len(others))},
                int(ordered[row, column]),
                "repeats",
            )

    if exact_totals:
        expected = cells.size // symbols
        totals = np.bincount(cells.ravel(), minlength=symbols)
        off = np.flatnonzero(totals != expected)
        if off.size:
            return CubeViolation((), {}, int(off[0]), f"occurs {int(totals[off[0]])} times, expected {expected}")
    return None


def validate_cube(cube: LatinHypercube) -> Tuple[bool, Optional[CubeViolation]]:
    if not 1 <= cube.k <= cube.dim:
        raise StructureError(f"class {cube.k} must lie in 1..{cube.dim}")
    if cube.cells.shape != (cube.order,) * cube.dim:
        raise StructureError(
            f"cells have shape {cube.cells.shape}, expected {(cube.order,) * cube.dim}"
        )
    violation = _first_violation(cube.cells, cube.k, cube.symbols, exact_totals=True)
    return violation is None, violation


def validate_cuboid(cuboid: LatinHypercuboid) -> Tuple[bool, Optional[CubeViolation]]:
    if list(cuboid.sides) != sorted(cuboid.sides, reverse=True):
        raise StructureError(f"type {cuboid.sides} is not nonincreasing")
    if not 1 <= cuboid.k <= len(cuboid.sides):
        raise StructureError(f"class {cuboid.k} must lie in 1..{len(cuboid.sides)}")
    if cuboid.cells.shape != cuboid.sides:
        raise StructureError(f"cells have shape {cuboid.cells.shape}, expected {cuboid.sides}")
    violation = _first_violation(cuboid.cells, cuboid.k, cuboid.symbols, exact_totals=False)
    return violation is None, violation


class _LatinSearch:
    """
    Cell-by-cell backtracking in row-major order with symbols tried in
    ascending order, so solutions come out in lexicographic order. Every
    k-layer keeps a bitmask of the symbols it already holds.
    """

    def __init__(self, sides: Tuple[int, ...], k: int, symbols: int) -> None:
        self.sides = sides
        self.symbols = symbols
        self.cell_count = math.prod(sides)
        d = len(sides)
        group_ids: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], int] = {}
        self.groups: List[Tuple[int, ...]] = []
        for cell in itertools.product(*(range(side) for side in sides)):
            ids = []
            for free in itertools.combinations(range(d), k):
                key = (free, tuple(cell[i] for i in range(d) if i not in free))
                ids.append(group_ids.setdefault(key, len(group_ids)))
            self.groups.append(tuple(ids))
        self.group_count = len(group_ids)
        self.full = (1 << symbols) - 1

    def _walk(
        self, position: int, used: List[int], filled: List[int], budget: SearchBudget
    ) -> Iterator[List[int]]:
        budget.tick()
        if position == self.cell_count:
            yield filled
            return
        groups = self.groups[position]
        taken = 0
        for g in groups:
            taken |= used[g]
        for symbol in iter_bits(self.full & ~taken):
            bit = 1 << symbol
            for g in groups:
                used[g] |= bit
            filled.append(symbol)
            yield from self._walk(position + 1, used, filled, budget)
            filled.pop()
            for g in groups:
                used[g] &= ~bit

    def solutions(self, budget: SearchBudget, first: Optional[int] = None) -> Iterator[List[int]]:
        used = [0] * self.group_count
        if first is None:
            yield from self._walk(0, used, [], budget)
            return
        for g in self.groups[0]:
            used[g] |= 1 << first
        yield from self._walk(1, used, [first], budget)


def _check_cube_params(d: int, n: int, k: int) -> None:
    if d < 1 or n < 1 or not 1 <= k <= d:
        raise InvalidParamsError(f"no Latin hypercubes with dim={d}, order={n}, class={k}")


def enumerate_cubes(
    d: int, n: int, k: int = 1, limits: Optional[Limits] = None
) -> Iterator[LatinHypercube]:
    _check_cube_params(d, n, k)
    search = _LatinSearch((n,) * d, k, n**k)
    budget = SearchBudget(limits)
    for emitted, filled in enumerate(search.solutions(budget), start=1):
        if limits is not None and limits.max_results is not None and emitted > limits.max_results:
            raise LimitExceededError("max_results", limits.max_results, budget.nodes)
        yield LatinHypercube(d, n, k, np.array(filled, dtype=np.int64).reshape((n,) * d))


def _count_from_first(task: Tuple[Tuple[int, ...], int, int, int], limits: Limits) -> Tuple[int, int]:
    sides, k, symbols, first = task
    search = _LatinSearch(sides, k, symbols)
    budget = SearchBudget(limits)
    count = sum(1 for _ in search.solutions(budget, first))
    return count, budget.nodes


def _branch_nodes(result: Tuple[int, int]) -> int:
    return result[1]


def _count_arrays(
    sides: Tuple[int, ...], k: int, symbols: int, limits: Optional[Limits], jobs: int
) -> int:
    budget = SearchBudget(limits)
    tasks = [(sides, k, symbols, first) for first in range(symbols)]
    results = split_and_merge(tasks, _count_from_first, budget, _branch_nodes, jobs)
    logger.debug("Counted arrays of shape %s class %d in %d nodes", sides, k, budget.nodes)
    return sum(count for count, _ in results)


def count_cubes(
    d: int, n: int, k: int = 1, limits: Optional[Limits] = None, jobs: int = 1
) -> int:
    """#LHC(d, n, k), split over the symbol of the first cell."""
    _check_cube_params(d, n, k)
    return _count_arrays((n,) * d, k, n**k, limits, jobs)


def count_table(
    d_max: int, n: int, k: int = 1, limits: Optional[Limits] = None, jobs: int = 1
) -> Dict[int, int]:
    """#LHC(d, n, k) for k <= d <= d_max; empty when the range is empty."""
    return {d: count_cubes(d, n, k, limits, jobs) for d in range(k, d_max + 1)}


def normalize_type(sides: Sequence[int]) -> Tuple[int, ...]:
    normalized = tuple(sorted(sides, reverse=True))
    if normalized != tuple(sides):
        logger.info("Normalized cuboid type %s to %s", tuple(sides), normalized)
    return normalized


def _check_cuboid_params(sides: Tuple[int, ...], k: int) -> None:
    if not sides or any(side < 2 for side in sides) or not 1 <= k <= len(sides):
        raise InvalidParamsError(f"no Latin hypercuboids of type {sides} and class {k}")


def enumerate_cuboids(
    sides: Sequence[int], k: int = 1, limits: Optional[Limits] = None
) -> Iterator[LatinHypercuboid]:
    normalized = normalize_type(sides)
    _check_cuboid_params(normalized, k)
    symbols = math.prod(normalized[:k])
    search = _LatinSearch(normalized, k, symbols)
    budget = SearchBudget(limits)
    for filled in search.solutions(budget):
        yield LatinHypercuboid(normalized, k, np.array(filled, dtype=np.int64).reshape(normalized))


def count_cuboids(
    sides: Sequence[int], k: int = 1, limits: Optional[Limits] = None, jobs: int = 1
) -> int:
    normalized = normalize_type(sides)
    _check_cuboid_params(normalized, k)
    return _count_arrays(normalized, k, math.prod(normalized[:k]), limits, jobs)


def load_cube(path: Union[str, Path]) -> LatinHypercube:
    with open(path, encoding="utf-8") as cube_file:
        try:
            data = json.load(cube_file)
        except json.JSONDecodeError as e:
            raise InvalidParamsError(f"{path} is not valid JSON: {e}") from e
    return LatinHypercube.from_dict(data)


@dataclass(frozen=True)
class ConstructionSpec:
    """
    Data of a singular endomorphism of H(m, n): the image layer, a partition
    of the coordinates, one class-1 cube per part, and ``matching[i]`` = the
    free coordinate of the image layer that carries the symbol of part i.
    """

    layer: Layer
    parts: Tuple[FrozenSet[int], ...]
    cubes: Tuple[LatinHypercube, ...]
    matching: Tuple[int, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "layer": self.layer.to_dict(),
            "parts": [sorted(i + 1 for i in part) for part in self.parts],
            "cubes": [cube.to_dict() for cube in self.cubes],
            "matching": [j + 1 for j in self.matching],
        }


def check_construction_spec(params: GraphParams, spec: ConstructionSpec) -> None:
    m, n = params.m, params.n
    try:
        check_layer(params, spec.layer)
    except InvalidParamsError as e:
        raise StructureError(f"image {e}") from e
    covered = sorted(i for part in spec.parts for i in part)
    if covered != list(range(m)):
        raise StructureError(f"parts {spec.to_dict()['parts']} do not partition 1..{m}")
    if not (len(spec.parts) == len(spec.cubes) == len(spec.matching)):
        raise StructureError("parts, cubes and matching differ in length")
    if sorted(spec.matching) != sorted(spec.layer.free) or len(spec.layer.free) != len(spec.parts):
        raise StructureError("matching is not a bijection onto the free coordinates of the layer")
    for part, cube in zip(spec.parts, spec.cubes):
        if cube.dim != len(part) or cube.order != n or cube.k != 1:
            raise StructureError(
                f"cube (dim={cube.dim}, order={cube.order}, class={cube.k}) does not fit a part of size {len(part)}"
            )
        valid, violation = validate_cube(cube)
        if not valid:
            raise StructureError(f"cube for part {sorted(i + 1 for i in part)} is not Latin: {violation}")


def build_endomorphism(params: GraphParams, spec: ConstructionSpec) -> EndoMap:
    """
    x maps to the point of the image layer whose coordinate matching[i] holds
    the symbol of cube i at x restricted to part i; fixed coordinates keep the
    layer's values.
    """
    check_construction_spec(params, spec)
    tuples = vertex_tuples(params)
    images = np.empty_like(tuples)
    for i, value in spec.layer.fixed:
        images[:, i] = value
    for part, cube, target in zip(spec.parts, spec.cubes, spec.matching):
        axes = sorted(part)
        images[:, target] = cube.cells[tuple(tuples[:, a] for a in axes)]
    return EndoMap.of(images @ np.asarray(params.radix, dtype=np.int64))


def cube_catalogue(n: int, d_max: int, limits: Optional[Limits] = None) -> Dict[int, List[LatinHypercube]]:
    return {d: list(enumerate_cubes(d, n, 1, limits)) for d in range(1, d_max + 1)}


def enumerate_construction_specs(
    params: GraphParams,
    k: int,
    catalogue: Optional[Dict[int, List[LatinHypercube]]] = None,
) -> Iterator[ConstructionSpec]:
    """Every spec of rank n^k in canonical order (layer, partition, cubes, matching)."""
    m, n = params.m, params.n
    if not 1 <= k <= m - 1:
        raise InvalidParamsError(f"rank exponent k={k} must satisfy 1 <= k <= {m - 1}")
    catalogue = catalogue or cube_catalogue(n, m - k + 1)
    for layer in enumerate_layers(params, k):
        targets = sorted(layer.free)
        for partition in set_partitions(m, k):
            choices = [catalogue[len(part)] for part in partition.parts]
            for cubes in itertools.product(*choices):
                for matching in itertools.permutations(targets):
                    yield ConstructionSpec(layer, partition.parts, tuple(cubes), tuple(matching))


def random_construction_spec(
    params: GraphParams,
    k: int,
    rng: random.Random,
    catalogue: Dict[int, List[LatinHypercube]],
) -> ConstructionSpec:
    m = params.m
    free = sorted(rng.sample(range(m), k))
    point = [rng.randrange(side) for side in params.sides]
    layer = Layer.through(point, free)
    partitions = list(set_partitions(m, k))
    partition = partitions[rng.randrange(len(partitions))]
    cubes = tuple(rng.choice(catalogue[len(part)]) for part in partition.parts)
    matching = list(free)
    rng.shuffle(matching)
    return ConstructionSpec(layer, partition.parts, cubes, tuple(matching))
