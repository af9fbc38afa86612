from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Sequence, Tuple

from hamendo.error import InvalidParamsError
from hamendo.hamming import GraphParams


@dataclass(frozen=True)
class EndoMap:
    """A total self-map of the vertex set, ``images[v]`` being the image of v."""

    images: Tuple[int, ...]

    @staticmethod
    def of(images: Sequence[int]) -> "EndoMap":
        return EndoMap(tuple(int(v) for v in images))

    @staticmethod
    def identity(params: GraphParams) -> "EndoMap":
        return EndoMap(tuple(range(params.vertex_count)))

    def __len__(self) -> int:
        return len(self.images)

    def image(self) -> FrozenSet[int]:
        return frozenset(self.images)

    @property
    def rank(self) -> int:
        return len(set(self.images))

    @property
    def is_singular(self) -> bool:
        return self.rank < len(self.images)

    def check_total(self, params: GraphParams) -> None:
        if len(self.images) != params.vertex_count:
            raise InvalidParamsError(
                f"map has {len(self.images)} entries, {params} has {params.vertex_count} vertices"
            )
        if any(not 0 <= v < params.vertex_count for v in self.images):
            raise InvalidParamsError("map sends a vertex outside the vertex range")


@dataclass(frozen=True)
class KernelPartition:
    classes: Tuple[FrozenSet[int], ...]

    @property
    def rank(self) -> int:
        return len(self.classes)

    @property
    def class_sizes(self) -> List[int]:
        return sorted(len(c) for c in self.classes)

    @property
    def uniform(self) -> bool:
        return len(set(len(c) for c in self.classes)) <= 1


def kernel_partition(f: EndoMap) -> KernelPartition:
    """Classes ordered by their image vertex."""
    fibres: Dict[int, List[int]] = defaultdict(list)
    for v, w in enumerate(f.images):
        fibres[w].append(v)
    return KernelPartition(tuple(frozenset(fibres[w]) for w in sorted(fibres)))
