import logging
from typing import List

from hamendo.endomorphisms import EndoAnalysis
from hamendo.maps import EndoMap
from hamendo.settings import GraphFamilies, Property
from hamendo.target import Target
from hamendo.verifiers.verify import SingularMapVerifier
from hamendo.violations import Violation, ViolationCode

logger = logging.getLogger("hamendo")


class CategoricalProductVerifier(SingularMapVerifier):
    """H(m, n, m): every singular endomorphism is uniform of rank n^k, 1 <= k <= m-1."""

    @staticmethod
    def name() -> str:
        return "categorical"

    @staticmethod
    def full_name() -> str:
        return "hamendo.verifiers.CategoricalProductVerifier"

    @staticmethod
    def family() -> Property:
        return GraphFamilies.CATEGORICAL

    def check_map(self, target: Target, f: EndoMap, analysis: EndoAnalysis) -> List[Violation]:
        params = target.get_params()
        found: List[Violation] = []
        if not analysis.uniform:
            found.append(
                self.violation(
                    ViolationCode.NOT_UNIFORM, target, f"kernel class sizes {sorted(set(analysis.class_sizes))}", f
                )
            )
        ranks = {params.n**k for k in range(1, params.m)}
        if analysis.rank not in ranks:
            found.append(
                self.violation(
                    ViolationCode.UNEXPECTED_RANK, target, f"rank {analysis.rank} not in {sorted(ranks)}", f
                )
            )
        return found
