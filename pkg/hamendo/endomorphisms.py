"""
Endomorphism search and analysis.

The search assigns images vertex by vertex in a static order (most already
ordered neighbours first, ties by vertex id). Every vertex keeps a domain
bitmask of images still compatible with its assigned neighbours; assigning
v -> x intersects the domains of v's unassigned neighbours with N(x) and
backtracks as soon as one of them empties. A used-image counter tracks the
rank of the partial map, which cuts branches that can no longer reach an
admissible rank.
"""

import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import (
    Dict,
    FrozenSet,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from hamendo.cliques import complement_colouring_data
from hamendo.error import (
    InvalidParamsError,
    LimitExceededError,
    NotAnEndomorphismError,
    StructureError,
)
from hamendo.hamming import (
    GraphParams,
    Layer,
    adjacency_masks,
    as_layer,
    iter_bits,
    vertex_tuples,
)
from hamendo.latin import (
    ConstructionSpec,
    LatinHypercube,
    build_endomorphism,
    validate_cube,
)
from hamendo.limits import Limits, SearchBudget, check_vertex_limit
from hamendo.maps import EndoMap, KernelPartition, kernel_partition
from hamendo.tools.parallel import split_and_merge

logger = logging.getLogger("hamendo")


class SearchMode(Enum):
    COUNT = "count"
    ENUMERATE = "enumerate"
    PROPERTY_CHECK = "property-check"


class VertexOrder(Enum):
    CONSTRAINT = "constraint"
    NATURAL = "natural"


@dataclass(frozen=True)
class SearchOptions:
    singular_only: bool = False
    rank_filter: Optional[FrozenSet[int]] = None
    mode: SearchMode = SearchMode.COUNT
    cap: Optional[int] = None
    canonical_order: bool = True
    vertex_order: VertexOrder = VertexOrder.CONSTRAINT
    # count one root image and scale by the vertex count; Hamming graphs are
    # vertex-transitive under coordinatewise translations
    use_symmetry: bool = False

    def __post_init__(self) -> None:
        if self.cap is not None and self.cap < 1:
            raise InvalidParamsError(f"cap must be at least 1, got {self.cap}")
        if self.rank_filter is not None and not self.rank_filter:
            raise InvalidParamsError("rank filter must not be empty")


@dataclass(frozen=True)
class EndoAnalysis:
    rank: int
    uniform: bool
    image_layer: Optional[Layer]
    layer_dim: Optional[int]
    class_sizes: Tuple[int, ...]

    def to_dict(self) -> Dict[str, object]:
        return {
            "rank": self.rank,
            "uniform": self.uniform,
            "image_layer": None if self.image_layer is None else self.image_layer.to_dict(),
        }


@dataclass
class SearchTally:
    by_rank: Dict[int, int] = field(default_factory=dict)
    nodes: int = 0
    seconds: float = 0.0
    partial: bool = False

    @property
    def total(self) -> int:
        return sum(self.by_rank.values())

    def merge(self, by_rank: Dict[int, int], nodes: int) -> None:
        for rank, count in by_rank.items():
            self.by_rank[rank] = self.by_rank.get(rank, 0) + count
        self.nodes += nodes


def is_endomorphism(params: GraphParams, f: EndoMap) -> bool:
    f.check_total(params)
    masks = adjacency_masks(params)
    images = f.images
    for v, neighbourhood in enumerate(masks):
        target = masks[images[v]]
        for u in iter_bits(neighbourhood >> (v + 1)):
            if not (target >> images[u + v + 1]) & 1:
                return False
    return True


def analyze(params: GraphParams, f: EndoMap) -> EndoAnalysis:
    if not is_endomorphism(params, f):
        raise NotAnEndomorphismError(f"the map is not an endomorphism of {params}")
    kernel = kernel_partition(f)
    layer = as_layer(params, f.image())
    return EndoAnalysis(
        rank=kernel.rank,
        uniform=kernel.uniform,
        image_layer=layer,
        layer_dim=None if layer is None else layer.dimension,
        class_sizes=tuple(kernel.class_sizes),
    )


def search_order(masks: Sequence[int], vertex_order: VertexOrder = VertexOrder.CONSTRAINT) -> List[int]:
    count = len(masks)
    if vertex_order is VertexOrder.NATURAL:
        return list(range(count))
    ordered: List[int] = []
    ordered_mask = 0
    constraint = [0] * count
    remaining = set(range(count))
    while remaining:
        v = min(remaining, key=lambda u: (-constraint[u], u))
        remaining.remove(v)
        ordered.append(v)
        ordered_mask |= 1 << v
        for u in iter_bits(masks[v] & ~ordered_mask):
            constraint[u] += 1
    return ordered


class EndomorphismSearch:
    def __init__(
        self,
        params: GraphParams,
        options: Optional[SearchOptions] = None,
        limits: Optional[Limits] = None,
    ) -> None:
        self.params = params
        self.options = options or SearchOptions()
        self.limits = limits or Limits()
        check_vertex_limit(params.vertex_count, self.limits.max_search_vertices, "max_search_vertices")

        self._n = params.vertex_count
        self._masks = adjacency_masks(params)
        self._order = search_order(self._masks, self.options.vertex_order)
        position = {v: i for i, v in enumerate(self._order)}
        self._forward = [
            [u for u in iter_bits(self._masks[v]) if position[u] > position[v]]
            for v in range(self._n)
        ]
        ranks = self.options.rank_filter
        self._max_rank = self._n - 1 if self.options.singular_only else self._n
        if ranks is not None:
            self._max_rank = min(self._max_rank, max(ranks))
        self._min_rank = 1 if ranks is None else min(ranks)

        self._images = [0] * self._n
        self.tally = SearchTally()

    @property
    def order(self) -> List[int]:
        return list(self._order)

    def _admissible(self, rank: int) -> bool:
        if self.options.singular_only and rank == self._n:
            return False
        ranks = self.options.rank_filter
        return ranks is None or rank in ranks

    def _walk(
        self,
        depth: int,
        domains: List[int],
        uses: List[int],
        distinct: int,
        budget: SearchBudget,
    ) -> Iterator[int]:
        budget.tick()
        if depth == self._n:
            yield distinct
            return
        v = self._order[depth]
        remaining = self._n - depth - 1
        for x in iter_bits(domains[v]):
            rank = distinct + (uses[x] == 0)
            if rank > self._max_rank or rank + remaining < self._min_rank:
                continue
            neighbourhood = self._masks[x]
            saved = []
            consistent = True
            for u in self._forward[v]:
                narrowed = domains[u] & neighbourhood
                if not narrowed:
                    consistent = False
                    break
                saved.append((u, domains[u]))
                domains[u] = narrowed
            if consistent:
                self._images[v] = x
                uses[x] += 1
                yield from self._walk(depth + 1, domains, uses, rank, budget)
                uses[x] -= 1
            for u, previous in saved:
                domains[u] = previous

    def _leaves(self, budget: SearchBudget, root_image: Optional[int] = None) -> Iterator[int]:
        full = (1 << self._n) - 1
        domains = [full] * self._n
        if root_image is not None:
            domains[self._order[0]] = 1 << root_image
        for rank in self._walk(0, domains, [0] * self._n, 0, budget):
            if self._admissible(rank):
                yield rank

    def count_root(
        self, root_image: Optional[int], limits: Optional[Limits] = None
    ) -> Tuple[Dict[int, int], int]:
        budget = SearchBudget(limits or self.limits)
        by_rank: Counter = Counter()
        for rank in self._leaves(budget, root_image):
            by_rank[rank] += 1
        return dict(by_rank), budget.nodes

    def count(self, jobs: int = 1) -> SearchTally:
        """Exact totals per rank; maps are never materialised."""
        budget = SearchBudget(self.limits)
        roots = [0] if self.options.use_symmetry else list(range(self._n))
        tasks = [(self.params, self.options, root) for root in roots]
        tally = SearchTally()
        for by_rank, nodes in split_and_merge(tasks, _count_root, budget, _branch_nodes, jobs):
            tally.merge(by_rank, nodes)
        if self.options.use_symmetry:
            tally.by_rank = {rank: count * self._n for rank, count in tally.by_rank.items()}
        tally.seconds = budget.seconds
        self.tally = tally
        logger.info(
            "Counted %d endomorphisms of %s in %d nodes (%.2fs)",
            tally.total,
            self.params,
            tally.nodes,
            tally.seconds,
        )
        return tally

    def stream(self) -> Iterator[EndoMap]:
        """
        Every admissible endomorphism, one at a time, in search order. With a
        cap the stream stops early and ``tally.partial`` is set.
        """
        budget = SearchBudget(self.limits)
        self.tally = SearchTally()
        cap = self.options.cap
        max_results = self.limits.max_results
        emitted = 0
        for rank in self._leaves(budget):
            if cap is not None and emitted >= cap:
                self.tally.partial = True
                logger.warning("Stopped %s search at cap %d; results are partial", self.params, cap)
                break
            if max_results is not None and emitted >= max_results:
                raise LimitExceededError("max_results", max_results, budget.nodes)
            emitted += 1
            self.tally.by_rank[rank] = self.tally.by_rank.get(rank, 0) + 1
            self.tally.nodes = budget.nodes
            yield EndoMap(tuple(self._images))
        self.tally.nodes = budget.nodes
        self.tally.seconds = budget.seconds


def _count_root(
    task: Tuple[GraphParams, SearchOptions, Optional[int]], limits: Limits
) -> Tuple[Dict[int, int], int]:
    params, options, root = task
    return EndomorphismSearch(params, options, limits).count_root(root)


def _branch_nodes(result: Tuple[Dict[int, int], int]) -> int:
    return result[1]


def enumerate_endomorphisms(
    params: GraphParams,
    options: Optional[SearchOptions] = None,
    limits: Optional[Limits] = None,
) -> Iterator[EndoMap]:
    yield from EndomorphismSearch(params, options, limits).stream()


def count_endomorphisms(
    params: GraphParams,
    options: Optional[SearchOptions] = None,
    limits: Optional[Limits] = None,
    jobs: int = 1,
) -> SearchTally:
    return EndomorphismSearch(params, options, limits).count(jobs)


def image_coordinates(params: GraphParams, f: EndoMap) -> np.ndarray:
    """(N, m) array whose row v is the tuple of f(v)."""
    return vertex_tuples(params)[np.asarray(f.images)]


def decompose(params: GraphParams, f: EndoMap) -> ConstructionSpec:
    """
    Recover the construction data of a singular endomorphism of H(m, n): the
    image layer, the coordinate partition by dependency, one class-1 cube per
    part and the matching of parts to image coordinates. The result rebuilds
    f exactly.
    """
    if params.distances != frozenset({1}) or not params.is_cubic:
        raise InvalidParamsError(f"decomposition needs H(m, n) with S={{1}}, got {params}")
    if not is_endomorphism(params, f):
        raise NotAnEndomorphismError(f"the map is not an endomorphism of {params}")
    if not f.is_singular:
        raise InvalidParamsError("automorphisms have no Latin decomposition")

    layer = as_layer(params, f.image())
    if layer is None:
        raise StructureError("the image of the endomorphism is not a layer")

    m, n = params.m, params.n
    coords = image_coordinates(params, f)
    dependencies: Dict[int, FrozenSet[int]] = {}
    for target in sorted(layer.free):
        values = coords[:, target].reshape(params.sides)
        dependencies[target] = frozenset(
            axis for axis in range(m) if np.any(np.diff(values, axis=axis) != 0)
        )

    covered = sorted(axis for axes in dependencies.values() for axis in axes)
    if covered != list(range(m)):
        raise StructureError(
            f"image coordinates depend on {covered}, which is not a partition of the coordinates"
        )

    parts: List[Tuple[FrozenSet[int], LatinHypercube, int]] = []
    for target, axes in dependencies.items():
        values = coords[:, target].reshape(params.sides)
        index = tuple(slice(None) if axis in axes else 0 for axis in range(m))
        cube = LatinHypercube(len(axes), n, 1, np.ascontiguousarray(values[index]))
        valid, violation = validate_cube(cube)
        if not valid:
            raise StructureError(f"image coordinate {target + 1} is not induced by a Latin hypercube: {violation}")
        parts.append((axes, cube, target))

    parts.sort(key=lambda part: min(part[0]))
    spec = ConstructionSpec(
        layer,
        tuple(part[0] for part in parts),
        tuple(part[1] for part in parts),
        tuple(part[2] for part in parts),
    )
    if build_endomorphism(params, spec) != f:
        raise StructureError("the recovered construction does not rebuild the map")
    return spec


def preimage_array(params: GraphParams, f: EndoMap) -> Optional[np.ndarray]:
    """
    The array over the vertex grid holding, at x, the position of f(x) inside
    the image layer (row-major over the free coordinates). None when the image
    is not a layer. For minimal-rank maps this array is the Latin hypercube
    (or hypercuboid) of class k inducing f.
    """
    layer = as_layer(params, f.image())
    if layer is None:
        return None
    free = sorted(layer.free)
    coords = image_coordinates(params, f)[:, free]
    weights = np.ones(len(free), dtype=np.int64)
    for j in range(len(free) - 2, -1, -1):
        weights[j] = weights[j + 1] * params.sides[free[j + 1]]
    return (coords @ weights).reshape(params.sides)


def build_colouring(
    params: GraphParams,
    parts: Sequence[FrozenSet[int]],
    targets: Sequence[int],
) -> EndoMap:
    """The map sending every vertex of ``parts[i]`` to ``targets[i]``."""
    if len(parts) != len(targets):
        raise InvalidParamsError("every part needs exactly one target vertex")
    images = [-1] * params.vertex_count
    for part, target in zip(parts, targets):
        for v in part:
            if images[v] != -1:
                raise InvalidParamsError(f"vertex {v} lies in two parts")
            images[v] = target
    if -1 in images:
        raise InvalidParamsError("the parts do not cover the vertex set")
    return EndoMap(tuple(images))


def random_colouring(
    params: GraphParams,
    partitions: Sequence[Sequence[FrozenSet[int]]],
    images: Sequence[FrozenSet[int]],
    rng: random.Random,
) -> EndoMap:
    """
    A colouring built from a random partition, a random image clique and a
    random matching between the parts and the image vertices.
    """
    partition = partitions[rng.randrange(len(partitions))]
    image = sorted(images[rng.randrange(len(images))])
    if len(image) != len(partition):
        raise InvalidParamsError(
            f"partition has {len(partition)} parts but the image has {len(image)} vertices"
        )
    rng.shuffle(image)
    return build_colouring(params, partition, image)


def collapses_kernel_into(kernel: KernelPartition, blocks: Sequence[FrozenSet[int]]) -> bool:
    """True when every kernel class is one of ``blocks``."""
    block_set = set(blocks)
    return all(c in block_set for c in kernel.classes)


def sample_colourings(
    params: GraphParams,
    count: int,
    rng: random.Random,
    limits: Optional[Limits] = None,
) -> Iterator[EndoMap]:
    """``count`` seeded colourings of a complement family, see ``complement_colouring_data``."""
    partitions, images = complement_colouring_data(params, limits)
    for _ in range(count):
        yield random_colouring(params, partitions, images, rng)
