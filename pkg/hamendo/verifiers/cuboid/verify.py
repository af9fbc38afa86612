import itertools
import logging
import math
from typing import List, Set

import numpy as np

from hamendo.endomorphisms import EndoAnalysis, preimage_array
from hamendo.formulas import rectangle_count
from hamendo.latin import LatinHypercuboid, count_cuboids, validate_cuboid
from hamendo.maps import EndoMap
from hamendo.settings import GraphFamilies, Property
from hamendo.target import Target
from hamendo.verifiers.verify import SingularMapVerifier, VerifyResults
from hamendo.violations import CountViolationDetails, Violation, ViolationCode

logger = logging.getLogger("hamendo")


def allowed_ranks(sides: List[int]) -> Set[int]:
    """n_1 times the product over a proper subset I of the positions 2..m, sides sorted nonincreasingly."""
    ordered = sorted(sides, reverse=True)
    rest = ordered[1:]
    ranks = set()
    for size in range(len(rest)):
        for subset in itertools.combinations(rest, size):
            ranks.add(ordered[0] * math.prod(subset))
    return ranks


class CuboidVerifier(SingularMapVerifier):
    """
    K_n1 x ... x K_nm with mixed sides: singular endomorphisms are uniform of
    rank n_1 times a product of sides over a proper index subset, and those of
    rank n_1 are induced by Latin hypercuboids.
    """

    @staticmethod
    def name() -> str:
        return "cuboid"

    @staticmethod
    def full_name() -> str:
        return "hamendo.verifiers.CuboidVerifier"

    @staticmethod
    def family() -> Property:
        return GraphFamilies.CUBOID

    def check_map(self, target: Target, f: EndoMap, analysis: EndoAnalysis) -> List[Violation]:
        params = target.get_params()
        found: List[Violation] = []
        if not analysis.uniform:
            found.append(
                self.violation(
                    ViolationCode.NOT_UNIFORM, target, f"kernel class sizes {sorted(set(analysis.class_sizes))}", f
                )
            )
        ranks = allowed_ranks(list(params.sides))
        if analysis.rank not in ranks:
            found.append(
                self.violation(ViolationCode.UNEXPECTED_RANK, target, f"rank {analysis.rank} not in {sorted(ranks)}", f)
            )
        if found or analysis.rank != max(params.sides):
            return found

        cells = preimage_array(params, f)
        if cells is None:
            found.append(self.violation(ViolationCode.IMAGE_NOT_LAYER, target, "minimal-rank image", f))
            return found
        normalized, perm = params.normalized()
        cuboid = LatinHypercuboid(normalized.sides, 1, np.ascontiguousarray(np.transpose(cells, perm)))
        valid, violation = validate_cuboid(cuboid)
        if not valid:
            found.append(
                self.violation(
                    ViolationCode.DECOMPOSITION, target, f"preimage array is not a Latin hypercuboid: {violation}", f
                )
            )
        return found

    def check_totals(self, target: Target, results: VerifyResults) -> List[Violation]:
        params = target.get_params()
        if results.partial or params.m != 2 or target.get_context("search_options") is not None:
            return []
        n1, n2 = sorted(params.sides, reverse=True)
        expected = rectangle_count(n1, n2, count_cuboids((n1, n2), 1, target.get_context("limits")))
        if expected == results.maps_checked:
            return []
        return [
            Violation(
                ViolationCode.COUNT_MISMATCH,
                CountViolationDetails("singular endomorphisms", params.to_dict(), expected, results.maps_checked),
            )
        ]
