"""
Closed-form counts for singular endomorphisms of Hamming-type graphs.

All arithmetic is exact integer arithmetic. Cube counts (#LHC(d, n)) are
injected by the caller, either from an exhaustive enumeration or from the
literature table in the settings, so a formula never silently recomputes its
inputs.
"""

import functools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterator, List, Mapping, Optional, Tuple

from hamendo.error import InvalidParamsError

logger = logging.getLogger("hamendo")


class Provenance:
    FORMULA = "formula"
    EXHAUSTIVE = "exhaustive"
    BOTH = "both"
    LITERATURE = "literature"


@dataclass(frozen=True)
class SetPartition:
    """A partition of {0, ..., m-1}; parts are ordered by their least element."""

    parts: Tuple[FrozenSet[int], ...]

    @property
    def k(self) -> int:
        return len(self.parts)

    def sizes(self) -> List[int]:
        return [len(part) for part in self.parts]

    def to_list(self) -> List[List[int]]:
        return [sorted(i + 1 for i in part) for part in self.parts]


def set_partitions(m: int, k: int) -> Iterator[SetPartition]:
    """Partitions of an m-set into k nonempty parts, via restricted growth strings."""
    if not 1 <= k <= m:
        raise InvalidParamsError(f"cannot partition {m} elements into {k} parts")

    def grow(prefix: List[int], used: int) -> Iterator[List[int]]:
        position = len(prefix)
        if position == m:
            if used == k:
                yield prefix
            return
        # not enough positions left to open the missing blocks
        if k - used > m - position:
            return
        for block in range(min(used + 1, k)):
            yield from grow(prefix + [block], max(used, block + 1))

    for labels in grow([], 0):
        blocks: List[List[int]] = [[] for _ in range(k)]
        for element, block in enumerate(labels):
            blocks[block].append(element)
        yield SetPartition(tuple(frozenset(block) for block in blocks))


@functools.lru_cache(maxsize=None)
def stirling2(m: int, k: int) -> int:
    if m == k:
        return 1
    if k == 0 or k > m:
        return 0
    return k * stirling2(m - 1, k) + stirling2(m - 1, k - 1)


def h_k(m: int, n: int, k: int) -> int:
    """Number of k-layers of H(m, n)."""
    if not 0 <= k <= m:
        raise InvalidParamsError(f"layer dimension {k} outside 0..{m}")
    return math.comb(m, k) * n ** (m - k)


def theorem3_count(m: int, n: int, k: int, cube_counts: Mapping[int, int]) -> int:
    """
    Singular endomorphisms of H(m, n) of rank n^k: a k-layer for the image,
    a partition of the coordinates into k parts, one Latin hypercube per part
    and a matching of parts to image coordinates.
    """
    if not 1 <= k <= m - 1:
        raise InvalidParamsError(f"rank exponent k={k} must satisfy 1 <= k <= m-1 = {m - 1}")
    missing = [d for d in range(1, m - k + 2) if d not in cube_counts]
    if missing:
        raise InvalidParamsError(f"missing #LHC(d, {n}) for d in {missing}")
    partition_sum = sum(
        math.prod(cube_counts[len(part)] for part in partition.parts)
        for partition in set_partitions(m, k)
    )
    return h_k(m, n, k) * math.factorial(k) * partition_sum


def theorem3_histogram(m: int, n: int, cube_counts: Mapping[int, int]) -> Dict[int, int]:
    """Singular endomorphism counts of H(m, n) keyed by rank n^k."""
    return {n**k: theorem3_count(m, n, k, cube_counts) for k in range(1, m)}


def l2_count(n: int, ls_count: int) -> int:
    """Singular endomorphisms of the square lattice graph H(2, n)."""
    if n < 3:
        raise InvalidParamsError(f"the square lattice formula needs n >= 3, got {n}")
    return 2 * n * ls_count


def l2_complement_count(n: int) -> int:
    if n < 3:
        raise InvalidParamsError(f"the complement formula needs n >= 3, got {n}")
    return 2 * math.factorial(n) ** 2


def complement_hamming_count(m: int, n: int, p1: int, lhc: int) -> int:
    """Singular endomorphisms of the complement of H(m, n): P1 · #LHC(m-1, n) · (n^(m-1))!."""
    if m < 2:
        raise InvalidParamsError("the complement of H(1, n) has no edges")
    return p1 * lhc * math.factorial(n ** (m - 1))


def complement_catproduct_count(m: int, n: int, p2: int) -> int:
    """Singular endomorphisms of the complement of H(m, n, m): P2 · h_{m-1}(m, n) · (n^(m-1))!."""
    if m < 2:
        raise InvalidParamsError("the complement of H(1, n, 1) has no edges")
    return p2 * h_k(m, n, m - 1) * math.factorial(n ** (m - 1))


def rectangle_count(n1: int, n2: int, lr_count: int) -> int:
    """Singular endomorphisms of K_n1 □ K_n2 for n1 > n2 > 1."""
    if not n1 > n2 > 1:
        raise InvalidParamsError(
            f"rectangles need n1 > n2 > 1, got ({n1}, {n2}); use l2_count for squares"
        )
    return n2 * lr_count


def aut_hamming_count(m: int, n: int) -> int:
    """|Aut H(m, n)| = |S_n wr S_m|."""
    return math.factorial(n) ** m * math.factorial(m)


@dataclass
class CountReport:
    quantity: str
    parameters: Dict[str, Any]
    formula_value: Optional[int] = None
    exhaustive_value: Optional[int] = None
    witness: Optional[Any] = None
    nodes: int = 0
    seconds: float = 0.0
    samples: int = 0
    sample_failures: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def provenance(self) -> Optional[str]:
        if self.formula_value is not None and self.exhaustive_value is not None:
            return Provenance.BOTH
        if self.formula_value is not None:
            return Provenance.FORMULA
        if self.exhaustive_value is not None:
            return Provenance.EXHAUSTIVE
        return None

    @property
    def match(self) -> Optional[bool]:
        if self.provenance != Provenance.BOTH:
            return None
        return self.formula_value == self.exhaustive_value

    @property
    def ok(self) -> bool:
        return self.match is not False and self.sample_failures == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "quantity": self.quantity,
            "parameters": self.parameters,
            "formula_value": None if self.formula_value is None else str(self.formula_value),
            "exhaustive_value": None if self.exhaustive_value is None else str(self.exhaustive_value),
            "provenance": self.provenance,
            "match": self.match,
            "witness": self.witness,
            "nodes_explored": self.nodes,
            "seconds": round(self.seconds, 3),
            "samples": self.samples,
            "sample_failures": self.sample_failures,
            "notes": self.notes,
        }
