import logging
from typing import List, Optional

import numpy as np

from hamendo.endomorphisms import EndoAnalysis, decompose, preimage_array
from hamendo.error import StructureError
from hamendo.formulas import theorem3_histogram
from hamendo.latin import LatinHypercube, count_table, validate_cube
from hamendo.maps import EndoMap
from hamendo.settings import GraphFamilies, Property
from hamendo.target import Target
from hamendo.verifiers.verify import SingularMapVerifier, VerifyResults
from hamendo.violations import CountViolationDetails, Violation, ViolationCode

logger = logging.getLogger("hamendo")


class LayerImageVerifier(SingularMapVerifier):
    """
    Singular endomorphisms whose image must be a d-layer of rank n^d for some
    d in ``dimension_range``, with a uniform kernel.
    """

    def dimension_range(self, target: Target) -> range:
        raise NotImplementedError

    def check_map(self, target: Target, f: EndoMap, analysis: EndoAnalysis) -> List[Violation]:
        params = target.get_params()
        found: List[Violation] = []
        if not analysis.uniform:
            found.append(
                self.violation(
                    ViolationCode.NOT_UNIFORM, target, f"kernel class sizes {sorted(set(analysis.class_sizes))}", f
                )
            )
        if analysis.layer_dim is None:
            found.append(self.violation(ViolationCode.IMAGE_NOT_LAYER, target, f"image of rank {analysis.rank}", f))
            return found
        dimensions = self.dimension_range(target)
        if analysis.layer_dim not in dimensions:
            found.append(
                self.violation(
                    ViolationCode.IMAGE_DIMENSION,
                    target,
                    f"image is a {analysis.layer_dim}-layer, expected {dimensions.start}..{dimensions.stop - 1}",
                    f,
                )
            )
        if analysis.rank != params.n**analysis.layer_dim:
            found.append(
                self.violation(
                    ViolationCode.UNEXPECTED_RANK,
                    target,
                    f"rank {analysis.rank} for a {analysis.layer_dim}-layer image",
                    f,
                )
            )
        return found


class HammingVerifier(LayerImageVerifier):
    @staticmethod
    def name() -> str:
        return "hamming"

    @staticmethod
    def full_name() -> str:
        return "hamendo.verifiers.HammingVerifier"

    @staticmethod
    def family() -> Property:
        return GraphFamilies.HAMMING

    def dimension_range(self, target: Target) -> range:
        return range(1, target.get_params().m)

    def check_map(self, target: Target, f: EndoMap, analysis: EndoAnalysis) -> List[Violation]:
        found = super().check_map(target, f, analysis)
        if not found and self.verifier_settings().get("decompose", True):
            try:
                decompose(target.get_params(), f)
            except StructureError as e:
                found.append(self.violation(ViolationCode.DECOMPOSITION, target, str(e), f))
        return found

    def check_totals(self, target: Target, results: VerifyResults) -> List[Violation]:
        if results.partial or target.get_context("search_options") is not None:
            return []
        params = target.get_params()
        expected = theorem3_histogram(params.m, params.n, count_table(params.m, params.n))
        if expected == results.observed_ranks:
            return []
        return [
            Violation(
                ViolationCode.COUNT_MISMATCH,
                CountViolationDetails(
                    "singular endomorphisms by rank",
                    params.to_dict(),
                    sum(expected.values()),
                    results.maps_checked,
                ),
            )
        ]


class DistanceRangeVerifier(LayerImageVerifier):
    """
    H(m, n, {1, ..., k}): images are d-layers with k <= d <= m-1, and a map
    of minimal rank n^k is induced by a Latin hypercube of class k.
    """

    @staticmethod
    def name() -> str:
        return "distance_range"

    @staticmethod
    def full_name() -> str:
        return "hamendo.verifiers.DistanceRangeVerifier"

    @staticmethod
    def family() -> Property:
        return GraphFamilies.DISTANCE_RANGE

    def dimension_range(self, target: Target) -> range:
        params = target.get_params()
        return range(max(params.distances), params.m)

    def check_map(self, target: Target, f: EndoMap, analysis: EndoAnalysis) -> List[Violation]:
        found = super().check_map(target, f, analysis)
        params = target.get_params()
        k = max(params.distances)
        if found or analysis.layer_dim != k:
            return found
        cells: Optional[np.ndarray] = preimage_array(params, f)
        if cells is None:
            return found
        valid, violation = validate_cube(LatinHypercube(params.m, params.n, k, cells))
        if not valid:
            found.append(
                self.violation(
                    ViolationCode.DECOMPOSITION,
                    target,
                    f"preimage array is not a Latin hypercube of class {k}: {violation}",
                    f,
                )
            )
        return found
