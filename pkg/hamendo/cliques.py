"""
Maximal cliques of Hamming-type graphs and the partition numbers built on them.

The generic enumerator is Bron-Kerbosch with Tomita pivoting over the
neighbourhood bitmasks of ``hamming.adjacency_masks``; it assumes nothing
about the family, so the specialised generators below (layers, permutation
diagonals, Latin hypercube graphs) can be checked against it.
"""

import itertools
import logging
import time
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

import numpy as np

from hamendo.error import (
    InvalidParamsError,
    LimitExceededError,
    StructureError,
    UnsupportedFamilyError,
)
from hamendo.hamming import (
    GraphParams,
    Layer,
    adjacency_masks,
    as_layer,
    enumerate_layers,
    iter_bits,
    layer_vertices,
    popcount,
    vertex_tuples,
)
from hamendo.latin import LatinHypercube, enumerate_cubes, validate_cube
from hamendo.limits import Limits, SearchBudget, check_vertex_limit
from hamendo.tools.exact_cover import ExactCover

logger = logging.getLogger("hamendo")


@dataclass(frozen=True)
class Clique:
    vertices: FrozenSet[int]

    def __len__(self) -> int:
        return len(self.vertices)

    def sorted(self) -> List[int]:
        return sorted(self.vertices)

    def mask(self) -> int:
        bits = 0
        for v in self.vertices:
            bits |= 1 << v
        return bits

    def to_dict(self, params: GraphParams) -> Dict[str, Any]:
        tuples = vertex_tuples(params)
        return {
            "size": len(self.vertices),
            "vertices": self.sorted(),
            "tuples": [tuples[v].tolist() for v in self.sorted()],
        }


class CliqueKind(Enum):
    LAYER = "1-layer"
    CO_LAYER = "(m-1)-layer"
    PERMUTATION_DIAGONAL = "permutation-diagonal"
    LATIN_HYPERCUBE = "latin-hypercube"
    OTHER = "other"


@dataclass(frozen=True)
class CliqueClass:
    kind: CliqueKind
    layer: Optional[Layer] = None
    # g_1, ..., g_{m-1} with the clique = {(g_1 i, ..., g_{m-1} i, i)}
    permutations: Optional[Tuple[Tuple[int, ...], ...]] = None
    cube: Optional[LatinHypercube] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "layer": None if self.layer is None else self.layer.to_dict(),
            "permutations": None if self.permutations is None else [list(g) for g in self.permutations],
            "cube": None if self.cube is None else self.cube.to_dict(),
        }


@dataclass(frozen=True)
class CodeParameters:
    length: int
    size: int
    min_distance: Optional[int]
    mds: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "length": self.length,
            "size": self.size,
            "min_distance": self.min_distance,
            "mds": self.mds,
        }


class PartitionKind(Enum):
    P1 = "P1"
    P2 = "P2"


@dataclass(frozen=True)
class PartitionCount:
    kind: PartitionKind
    m: int
    n: int
    value: int
    nodes: int = 0
    seconds: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "m": self.m,
            "n": self.n,
            "value": str(self.value),
            "nodes_explored": self.nodes,
            "seconds": round(self.seconds, 3),
        }


def is_clique(params: GraphParams, vertices: Iterable[int]) -> bool:
    masks = adjacency_masks(params)
    members = list(vertices)
    bits = 0
    for v in members:
        bits |= 1 << v
    return all((bits & ~(1 << v)) & ~masks[v] == 0 for v in members)


def is_maximal_clique(params: GraphParams, vertices: Iterable[int]) -> bool:
    members = list(vertices)
    if not members or not is_clique(params, members):
        return False
    masks = adjacency_masks(params)
    common = (1 << params.vertex_count) - 1
    for v in members:
        common &= masks[v]
    return common == 0


class _BronKerbosch:
    def __init__(self, params: GraphParams, limits: Limits) -> None:
        self.masks = adjacency_masks(params)
        self.budget = SearchBudget(limits)

    def _pivot(self, candidates: int, excluded: int) -> int:
        return max(
            iter_bits(candidates | excluded),
            key=lambda u: (popcount(candidates & self.masks[u]), -u),
        )

    def expand(self, clique: int, candidates: int, excluded: int) -> Iterator[int]:
        self.budget.tick()
        if not candidates:
            if not excluded:
                yield clique
            return
        pivot = self._pivot(candidates, excluded)
        for v in iter_bits(candidates & ~self.masks[pivot]):
            bit = 1 << v
            neighbourhood = self.masks[v]
            yield from self.expand(clique | bit, candidates & neighbourhood, excluded & neighbourhood)
            candidates &= ~bit
            excluded |= bit


def maximal_cliques(params: GraphParams, limits: Optional[Limits] = None) -> Iterator[Clique]:
    """
    Every maximal clique exactly once, each re-checked for pairwise adjacency
    and maximality before it is emitted.
    """
    limits = limits or Limits()
    check_vertex_limit(params.vertex_count, limits.max_vertices)
    search = _BronKerbosch(params, limits)
    emitted = 0
    for bits in search.expand(0, (1 << params.vertex_count) - 1, 0):
        clique = Clique(frozenset(iter_bits(bits)))
        if not is_maximal_clique(params, clique.vertices):
            raise StructureError(f"enumerated set {clique.sorted()} is not a maximal clique of {params}")
        emitted += 1
        if limits.max_results is not None and emitted > limits.max_results:
            raise LimitExceededError("max_results", limits.max_results, search.budget.nodes)
        yield clique
    logger.debug("Enumerated %d maximal cliques of %s in %d nodes", emitted, params, search.budget.nodes)


def clique_number(params: GraphParams, limits: Optional[Limits] = None) -> int:
    return max(len(clique) for clique in maximal_cliques(params, limits))


def layer_cliques(params: GraphParams, k: int = 1) -> Iterator[Clique]:
    """The k-layers as vertex sets; for S = {1} and k = 1 these are all maximal cliques."""
    for layer in enumerate_layers(params, k):
        yield Clique(layer_vertices(params, layer))


def permutation_cliques(params: GraphParams) -> Iterator[Clique]:
    """The sets {(g_1 i, ..., g_{m-1} i, i)}, maximal cliques of H(m, n, m)."""
    n = params.n
    radix = params.radix
    permutations = list(itertools.permutations(range(n)))
    for gs in itertools.product(permutations, repeat=params.m - 1):
        yield Clique(
            frozenset(
                sum(value * weight for value, weight in zip([g[i] for g in gs] + [i], radix))
                for i in range(n)
            )
        )


def latin_cliques(params: GraphParams, limits: Optional[Limits] = None) -> Iterator[Clique]:
    """Graphs {(x, L(x))} of the class-1 cubes L of dimension m-1, maximum cliques of the complement of H(m, n)."""
    m, n = params.m, params.n
    if m < 2:
        raise InvalidParamsError("Latin hypercube cliques need at least two coordinates")
    positions = np.indices((n,) * (m - 1)).reshape(m - 1, -1).T
    weights = np.asarray(params.radix, dtype=np.int64)
    for cube in enumerate_cubes(m - 1, n, 1, limits):
        points = np.column_stack([positions, cube.cells.reshape(-1)])
        yield Clique(frozenset(int(v) for v in points @ weights))


def _permutation_diagonal(params: GraphParams, points: np.ndarray) -> Optional[Tuple[Tuple[int, ...], ...]]:
    n, m = params.n, params.m
    if m < 2 or len(points) != n:
        return None
    if any(len(set(points[:, j].tolist())) != n for j in range(m)):
        return None
    by_last = points[np.argsort(points[:, -1])]
    return tuple(tuple(int(x) for x in by_last[:, j]) for j in range(m - 1))


def _graph_cube(params: GraphParams, points: np.ndarray) -> Optional[LatinHypercube]:
    """The array x -> last coordinate, when the points form the graph of a Latin hypercube."""
    n, m = params.n, params.m
    if m < 2 or len(points) != n ** (m - 1):
        return None
    cells = np.full((n,) * (m - 1), -1, dtype=np.int64)
    for point in points:
        position = tuple(int(x) for x in point[:-1])
        if cells[position] != -1:
            return None
        cells[position] = point[-1]
    cube = LatinHypercube(m - 1, n, 1, cells)
    valid, _ = validate_cube(cube)
    return cube if valid else None


def classify_clique(params: GraphParams, clique: Clique) -> CliqueClass:
    if not clique.vertices:
        return CliqueClass(CliqueKind.OTHER)
    try:
        layer = as_layer(params, clique.vertices)
        if layer is not None and layer.dimension == 1:
            return CliqueClass(CliqueKind.LAYER, layer=layer)
        if layer is not None and layer.dimension == params.m - 1:
            return CliqueClass(CliqueKind.CO_LAYER, layer=layer)
        if not params.is_cubic:
            return CliqueClass(CliqueKind.OTHER, layer=layer)
        points = vertex_tuples(params)[clique.sorted()]
        permutations = _permutation_diagonal(params, points)
        if permutations is not None:
            return CliqueClass(CliqueKind.PERMUTATION_DIAGONAL, permutations=permutations)
        cube = _graph_cube(params, points)
        if cube is not None:
            return CliqueClass(CliqueKind.LATIN_HYPERCUBE, cube=cube)
        return CliqueClass(CliqueKind.OTHER, layer=layer)
    except (InvalidParamsError, StructureError) as e:
        logger.debug("Could not classify clique %s: %s", clique.sorted(), e)
        return CliqueClass(CliqueKind.OTHER)


def clique_to_hypercube(params: GraphParams, clique: Clique) -> LatinHypercube:
    """
    Read a maximum clique of the complement of H(m, n) as the cube whose
    position is the first m-1 coordinates and whose symbol is the last one.
    """
    m = params.m
    if not params.is_cubic or m < 2 or params.distances != frozenset(range(2, m + 1)):
        raise InvalidParamsError(f"{params} is not the complement of a Hamming graph H(m, n)")
    n = params.n
    if len(clique) != n ** (m - 1):
        raise StructureError(f"clique has {len(clique)} vertices, a hypercube clique has {n ** (m - 1)}")
    if not is_clique(params, clique.vertices):
        raise StructureError(f"{clique.sorted()} is not a clique of {params}")
    cube = _graph_cube(params, vertex_tuples(params)[clique.sorted()])
    if cube is None:
        raise StructureError(f"clique {clique.sorted()} is not the graph of a Latin hypercube")
    return cube


def mds_parameters(params: GraphParams, clique: Clique) -> CodeParameters:
    """
    Code parameters of a clique of H(m, n, {k+1, ..., m}). The clique is MDS
    when it has n^(m-k) words at minimum distance k+1.
    """
    m = params.m
    k = min(params.distances) - 1
    if params.distances != frozenset(range(k + 1, m + 1)):
        raise InvalidParamsError(
            f"distance set {sorted(params.distances)} is not of the form {{k+1, ..., {m}}}"
        )
    n = params.n
    points = vertex_tuples(params)[clique.sorted()]
    min_distance: Optional[int] = None
    if len(points) >= 2:
        distances = np.count_nonzero(points[:, None, :] != points[None, :, :], axis=2)
        upper = distances[np.triu_indices(len(points), k=1)]
        min_distance = int(upper.min())
    mds = len(points) == n ** (m - k) and min_distance == k + 1
    return CodeParameters(m, len(points), min_distance, mds)


def _check_partition_params(m: int, n: int) -> None:
    if m < 2 or n < 2:
        raise InvalidParamsError(f"partition numbers need m >= 2 and n >= 2, got ({m}, {n})")


def count_P1(m: int, n: int, limits: Optional[Limits] = None, jobs: int = 1) -> PartitionCount:
    """Partitions of Z_n^m into 1-layers (line tilings)."""
    _check_partition_params(m, n)
    limits = limits or Limits()
    params = GraphParams.hamming(m, n)
    check_vertex_limit(params.vertex_count, limits.max_vertices)
    started = time.monotonic()
    rows = [clique.vertices for clique in layer_cliques(params, 1)]
    result = ExactCover(range(params.vertex_count), rows).count(limits, jobs)
    seconds = time.monotonic() - started
    logger.info("P1(%d, %d) = %d in %d nodes (%.2fs)", m, n, result.value, result.nodes, seconds)
    return PartitionCount(PartitionKind.P1, m, n, result.value, result.nodes, seconds)


def count_P2(m: int, n: int, limits: Optional[Limits] = None, jobs: int = 1) -> PartitionCount:
    """
    Partitions of Z_n^m into maximal cliques of H(m, n, m). At n = 2 the graph
    is a perfect matching, and the count is of the non-discrete partitions into
    cliques (vertices may stay single), i.e. the kernels of singular
    endomorphisms of the complement.
    """
    _check_partition_params(m, n)
    limits = limits or Limits()
    params = GraphParams.hamming(m, n, (m,))
    started = time.monotonic()
    rows = [clique.vertices for clique in maximal_cliques(params, limits)]
    if n == 2:
        rows.extend(frozenset({v}) for v in range(params.vertex_count))
    result = ExactCover(range(params.vertex_count), rows).count(limits, jobs)
    value = result.value - 1 if n == 2 else result.value
    seconds = time.monotonic() - started
    logger.info("P2(%d, %d) = %d in %d nodes (%.2fs)", m, n, value, result.nodes, seconds)
    return PartitionCount(PartitionKind.P2, m, n, value, result.nodes, seconds)


def p1_closed_form(m: int, n: int) -> Optional[int]:
    if m == 2:
        return 2
    if m == 3:
        return 3 * (2**n - 1)
    return None


def partition_blocks(
    params: GraphParams, rows: List[FrozenSet[int]], limits: Optional[Limits] = None
) -> Iterator[List[FrozenSet[int]]]:
    """The exact covers of the vertex set by ``rows``, as lists of blocks."""
    cover = ExactCover(range(params.vertex_count), rows)
    for solution in cover.solutions(limits):
        yield [rows[r] for r in solution]


def clique_partitions(
    params: GraphParams, cliques: Iterable[Clique], limits: Optional[Limits] = None
) -> List[List[FrozenSet[int]]]:
    """All partitions of the vertex set into the given cliques; raises past ``max_results``."""
    limits = limits or Limits()
    rows = [clique.vertices for clique in cliques]
    found: List[List[FrozenSet[int]]] = []
    for blocks in partition_blocks(params, rows, limits):
        found.append(blocks)
        if limits.max_results is not None and len(found) > limits.max_results:
            raise LimitExceededError("max_results", limits.max_results, len(found))
    return found


def complement_colouring_data(
    params: GraphParams, limits: Optional[Limits] = None
) -> Tuple[List[List[FrozenSet[int]]], List[FrozenSet[int]]]:
    """
    The partitions and image cliques whose matchings give the singular
    endomorphisms of a complement family: 1-layer partitions onto Latin
    hypercube cliques for the complement of H(m, n), partitions into maximal
    cliques of H(m, n, m) onto (m-1)-layers for the complement of H(m, n, m).
    """
    m = params.m
    if not params.is_cubic or m < 2:
        raise UnsupportedFamilyError(f"{params} is not a complement of a cubic Hamming graph")
    n = params.n
    if params.distances == frozenset(range(2, m + 1)):
        base = GraphParams.hamming(m, n)
        partitions = clique_partitions(params, layer_cliques(base, 1), limits)
        images = [clique.vertices for clique in latin_cliques(params, limits)]
    elif params.distances == frozenset(range(1, m)):
        base = GraphParams.hamming(m, n, (m,))
        partitions = clique_partitions(params, maximal_cliques(base, limits), limits)
        images = [clique.vertices for clique in layer_cliques(params, m - 1)]
    else:
        raise UnsupportedFamilyError(f"{params} is not a complement of H(m, n) or H(m, n, m)")
    logger.debug("%s: %d partitions, %d image cliques", params, len(partitions), len(images))
    return partitions, images
