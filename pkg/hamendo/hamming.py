"""
Generalized Hamming graphs H(n_1, ..., n_m, S).

Vertices are tuples with coordinate i in [0, n_i), identified with integers by
a mixed-radix encoding (coordinate 1 most significant). Two vertices are
adjacent when their Hamming distance lies in S. Adjacency is computed from the
tuples; graphs up to ``ADJACENCY_CACHE_LIMIT`` vertices also get a cached table
of neighbourhood bitmasks, and both paths agree bit for bit.

Coordinates are 0-indexed here. Serialized forms (``to_dict`` / ``to_text``)
use 1-indexed coordinates.
"""

import functools
import itertools
import logging
import math
import re
from dataclasses import dataclass
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from hamendo.error import InvalidParamsError

logger = logging.getLogger("hamendo")

ADJACENCY_CACHE_LIMIT = 4096

Coords = Tuple[int, ...]

_TEXT_FORM = re.compile(r"^\s*(\d+(?:x\d+)*)\s*(?::\s*S\s*=\s*(\d+(?:\s*,\s*\d+)*))?\s*$")


@dataclass(frozen=True)
class GraphParams:
    sides: Tuple[int, ...]
    distances: FrozenSet[int]

    def __post_init__(self) -> None:
        if len(self.sides) < 1:
            raise InvalidParamsError("a Hamming graph needs at least one coordinate")
        if any(side < 2 for side in self.sides):
            raise InvalidParamsError(f"every side must be at least 2, got {self.sides}")
        if not self.distances:
            raise InvalidParamsError("the distance set S must be nonempty")
        if not all(1 <= d <= len(self.sides) for d in self.distances):
            raise InvalidParamsError(
                f"distance set {sorted(self.distances)} must lie in 1..{len(self.sides)}"
            )

    @staticmethod
    def hamming(m: int, n: int, distances: Iterable[int] = (1,)) -> "GraphParams":
        return GraphParams(tuple([n] * m), frozenset(distances))

    @staticmethod
    def cuboid(sides: Sequence[int], distances: Iterable[int] = (1,)) -> "GraphParams":
        return GraphParams(tuple(sides), frozenset(distances))

    @staticmethod
    def from_text(text: str) -> "GraphParams":
        """Parse the text form ``3x3x3:S=1,2``; S defaults to {1}."""
        match = _TEXT_FORM.match(text)
        if match is None:
            raise InvalidParamsError(f"cannot parse graph description {text!r}")
        sides = tuple(int(side) for side in match.group(1).split("x"))
        distances = (
            frozenset(int(d) for d in match.group(2).split(","))
            if match.group(2)
            else frozenset({1})
        )
        return GraphParams(sides, distances)

    def to_text(self) -> str:
        sides = "x".join(str(side) for side in self.sides)
        return f"{sides}:S={','.join(str(d) for d in sorted(self.distances))}"

    def to_dict(self) -> Dict[str, Any]:
        return {"sides": list(self.sides), "distances": sorted(self.distances)}

    @property
    def m(self) -> int:
        return len(self.sides)

    @property
    def vertex_count(self) -> int:
        return math.prod(self.sides)

    @property
    def is_cubic(self) -> bool:
        return len(set(self.sides)) == 1

    @property
    def is_complete(self) -> bool:
        return self.distances == frozenset(range(1, self.m + 1))

    @property
    def n(self) -> int:
        if not self.is_cubic:
            raise InvalidParamsError(f"sides {self.sides} are not all equal")
        return self.sides[0]

    @property
    def radix(self) -> Tuple[int, ...]:
        return _radix(self.sides)

    def complement(self) -> "GraphParams":
        if self.is_complete:
            raise InvalidParamsError(f"{self.to_text()} is complete; its complement has no edges")
        return GraphParams(self.sides, frozenset(range(1, self.m + 1)) - self.distances)

    def normalized(self) -> Tuple["GraphParams", Tuple[int, ...]]:
        """
        Reorder the sides nonincreasingly. Returns the reordered parameters and
        the permutation ``perm`` with new coordinate j = old coordinate perm[j].
        """
        perm = tuple(sorted(range(self.m), key=lambda i: (-self.sides[i], i)))
        return GraphParams(tuple(self.sides[i] for i in perm), self.distances), perm

    def __str__(self) -> str:
        return f"H({self.to_text()})"


@functools.lru_cache(maxsize=None)
def _radix(sides: Tuple[int, ...]) -> Tuple[int, ...]:
    weights = []
    weight = 1
    for side in reversed(sides):
        weights.append(weight)
        weight *= side
    return tuple(reversed(weights))


@dataclass(frozen=True)
class Layer:
    """
    The set of vertices agreeing with ``fixed`` outside ``free``. ``fixed``
    holds (coordinate, value) pairs sorted by coordinate.
    """

    free: FrozenSet[int]
    fixed: Tuple[Tuple[int, int], ...]

    @property
    def dimension(self) -> int:
        return len(self.free)

    def fixed_values(self) -> Dict[int, int]:
        return dict(self.fixed)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "free": sorted(i + 1 for i in self.free),
            "fixed": {str(i + 1): value for i, value in self.fixed},
        }

    @staticmethod
    def from_dict(data: Dict[str, Any]) -> "Layer":
        free = frozenset(int(i) - 1 for i in data["free"])
        fixed = tuple(sorted((int(i) - 1, int(v)) for i, v in data["fixed"].items()))
        return Layer(free, fixed)

    @staticmethod
    def through(point: Sequence[int], free: Iterable[int]) -> "Layer":
        free_set = frozenset(free)
        return Layer(
            free_set,
            tuple((i, point[i]) for i in range(len(point)) if i not in free_set),
        )


@dataclass(frozen=True)
class LayerSystem:
    free: FrozenSet[int]
    members: Tuple[Layer, ...]


def check_tuple(params: GraphParams, t: Sequence[int]) -> None:
    if len(t) != params.m:
        raise InvalidParamsError(f"tuple {tuple(t)} has length {len(t)}, expected {params.m}")
    for i, (value, side) in enumerate(zip(t, params.sides)):
        if not 0 <= value < side:
            raise InvalidParamsError(f"coordinate {i + 1} of {tuple(t)} is outside [0, {side})")


def check_vertex(params: GraphParams, v: int) -> None:
    if not 0 <= v < params.vertex_count:
        raise InvalidParamsError(f"vertex id {v} is outside [0, {params.vertex_count})")


def check_layer(params: GraphParams, layer: Layer) -> None:
    coords = set(layer.free) | {i for i, _ in layer.fixed}
    if coords != set(range(params.m)) or len(layer.fixed) + len(layer.free) != params.m:
        raise InvalidParamsError(f"layer {layer.to_dict()} does not partition the coordinates")
    for i, value in layer.fixed:
        if not 0 <= value < params.sides[i]:
            raise InvalidParamsError(f"layer value {value} out of range at coordinate {i + 1}")


def encode(params: GraphParams, t: Sequence[int]) -> int:
    check_tuple(params, t)
    return sum(value * weight for value, weight in zip(t, params.radix))


def decode(params: GraphParams, v: int) -> Coords:
    check_vertex(params, v)
    coords = []
    for side in reversed(params.sides):
        v, value = divmod(v, side)
        coords.append(value)
    return tuple(reversed(coords))


def hamming_distance(a: Sequence[int], b: Sequence[int]) -> int:
    if len(a) != len(b):
        raise InvalidParamsError(f"cannot compare tuples of lengths {len(a)} and {len(b)}")
    return sum(1 for x, y in zip(a, b) if x != y)


def adjacent(params: GraphParams, a: int, b: int) -> bool:
    return hamming_distance(decode(params, a), decode(params, b)) in params.distances


@functools.lru_cache(maxsize=None)
def vertex_tuples(params: GraphParams) -> np.ndarray:
    """All vertices as an (N, m) array, row v being decode(v)."""
    grids = np.indices(params.sides).reshape(params.m, -1)
    tuples = np.ascontiguousarray(grids.T)
    tuples.setflags(write=False)
    return tuples


def _neighbour_mask(params: GraphParams, v: int) -> int:
    tuples = vertex_tuples(params)
    distances = np.count_nonzero(tuples != tuples[v], axis=1)
    row = np.isin(distances, sorted(params.distances))
    return int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")


@functools.lru_cache(maxsize=32)
def _cached_masks(params: GraphParams) -> Tuple[int, ...]:
    logger.debug("Caching adjacency of %s", params)
    return tuple(_neighbour_mask(params, v) for v in range(params.vertex_count))


def adjacency_masks(params: GraphParams) -> Tuple[int, ...]:
    """Neighbourhood of every vertex as an int bitmask (bit u set iff u ~ v)."""
    if params.vertex_count <= ADJACENCY_CACHE_LIMIT:
        return _cached_masks(params)
    return tuple(_neighbour_mask(params, v) for v in range(params.vertex_count))


def neighbours(params: GraphParams, v: int) -> List[int]:
    check_vertex(params, v)
    return list(iter_bits(_neighbour_mask(params, v)))


def edge_count(params: GraphParams) -> int:
    return sum(popcount(mask) for mask in adjacency_masks(params)) // 2


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def layer_count(params: GraphParams, k: int) -> int:
    """Number of k-layers: sum over k-subsets F of the product of the other sides."""
    _check_dimension(params, k)
    return sum(
        math.prod(params.sides[i] for i in range(params.m) if i not in free)
        for free in itertools.combinations(range(params.m), k)
    )


def _check_dimension(params: GraphParams, k: int) -> None:
    if not 0 <= k <= params.m:
        raise InvalidParamsError(f"layer dimension {k} outside 0..{params.m}")


def enumerate_layers(params: GraphParams, k: int) -> Iterator[Layer]:
    _check_dimension(params, k)
    for free in itertools.combinations(range(params.m), k):
        others = [i for i in range(params.m) if i not in free]
        for values in itertools.product(*(range(params.sides[i]) for i in others)):
            yield Layer(frozenset(free), tuple(zip(others, values)))


def layer_vertices(params: GraphParams, layer: Layer) -> FrozenSet[int]:
    check_layer(params, layer)
    fixed = layer.fixed_values()
    ranges = [
        range(params.sides[i]) if i in layer.free else (fixed[i],)
        for i in range(params.m)
    ]
    radix = params.radix
    return frozenset(
        sum(value * weight for value, weight in zip(t, radix))
        for t in itertools.product(*ranges)
    )


def layer_system_of(params: GraphParams, layer: Layer) -> LayerSystem:
    check_layer(params, layer)
    others = [i for i in range(params.m) if i not in layer.free]
    members = tuple(
        Layer(layer.free, tuple(zip(others, values)))
        for values in itertools.product(*(range(params.sides[i]) for i in others))
    )
    return LayerSystem(layer.free, members)


def minimal_layer_containing(params: GraphParams, vs: Iterable[int]) -> Layer:
    points = [decode(params, v) for v in vs]
    if not points:
        raise InvalidParamsError("the vertex set must be nonempty")
    free = frozenset(
        i for i in range(params.m) if any(p[i] != points[0][i] for p in points)
    )
    return Layer.through(points[0], free)


def as_layer(params: GraphParams, vs: Iterable[int]) -> Optional[Layer]:
    vertex_set = set(vs)
    layer = minimal_layer_containing(params, vertex_set)
    size = math.prod(params.sides[i] for i in layer.free)
    return layer if len(vertex_set) == size else None
