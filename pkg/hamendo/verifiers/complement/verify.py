import logging
import random
from typing import List, Optional

from hamendo.cliques import (
    Clique,
    CliqueKind,
    classify_clique,
    count_P1,
    count_P2,
    is_clique,
)
from hamendo.endomorphisms import EndoAnalysis, is_endomorphism, sample_colourings
from hamendo.formulas import complement_catproduct_count, complement_hamming_count
from hamendo.hamming import as_layer
from hamendo.latin import count_cubes
from hamendo.maps import EndoMap, kernel_partition
from hamendo.settings import GraphFamilies, Property
from hamendo.target import Target
from hamendo.verifiers.verify import SingularMapVerifier, VerifyResults
from hamendo.violations import CountViolationDetails, Violation, ViolationCode

logger = logging.getLogger("hamendo")


class ComplementVerifier(SingularMapVerifier):
    """
    Complements of H(m, n) and H(m, n, m) are pseudo-cores: every singular
    endomorphism is a uniform colouring onto a maximum clique, of rank
    n^(m-1).
    """

    def check_image(self, target: Target, f: EndoMap, analysis: EndoAnalysis) -> Optional[str]:
        raise NotImplementedError

    def check_class(self, target: Target, kernel_class: Clique) -> bool:
        raise NotImplementedError

    def expected_total(self, target: Target) -> int:
        raise NotImplementedError

    def check_map(self, target: Target, f: EndoMap, analysis: EndoAnalysis) -> List[Violation]:
        params = target.get_params()
        found: List[Violation] = []
        expected_rank = params.n ** (params.m - 1)
        if analysis.rank != expected_rank:
            found.append(
                self.violation(
                    ViolationCode.UNEXPECTED_RANK, target, f"rank {analysis.rank}, the clique number is {expected_rank}", f
                )
            )
        if not analysis.uniform:
            found.append(
                self.violation(
                    ViolationCode.NOT_UNIFORM, target, f"kernel class sizes {sorted(set(analysis.class_sizes))}", f
                )
            )
        problem = self.check_image(target, f, analysis)
        if problem is not None:
            found.append(self.violation(ViolationCode.IMAGE_NOT_CLIQUE, target, problem, f))
        odd = [c for c in kernel_partition(f).classes if not self.check_class(target, Clique(c))]
        if odd:
            found.append(
                self.violation(
                    ViolationCode.KERNEL_SHAPE, target, f"kernel class {sorted(odd[0])} has the wrong shape", f
                )
            )
        return found

    def check_totals(self, target: Target, results: VerifyResults) -> List[Violation]:
        found = self._check_samples(target)
        if results.partial or target.get_context("search_options") is not None:
            return found
        expected = self.expected_total(target)
        if expected != results.maps_checked:
            found.append(
                Violation(
                    ViolationCode.COUNT_MISMATCH,
                    CountViolationDetails(
                        "singular endomorphisms",
                        target.get_params().to_dict(),
                        expected,
                        results.maps_checked,
                    ),
                )
            )
        return found

    def _check_samples(self, target: Target) -> List[Violation]:
        samples = int(self.verifier_settings().get("samples", 0))
        if samples <= 0:
            return []
        params = target.get_params()
        rank = params.n ** (params.m - 1)
        rng = random.Random(self._settings.get("seed", 0))
        found: List[Violation] = []
        for f in sample_colourings(params, samples, rng, target.get_context("limits")):
            if not is_endomorphism(params, f):
                found.append(self.violation(ViolationCode.NOT_ENDOMORPHISM, target, "constructed colouring", f))
            elif f.rank != rank:
                found.append(
                    self.violation(
                        ViolationCode.UNEXPECTED_RANK, target, f"constructed colouring of rank {f.rank}", f
                    )
                )
        logger.info("Checked %d constructed colourings of %s", samples, target.get_source())
        return found


class ComplementHammingVerifier(ComplementVerifier):
    @staticmethod
    def name() -> str:
        return "complement_hamming"

    @staticmethod
    def full_name() -> str:
        return "hamendo.verifiers.ComplementHammingVerifier"

    @staticmethod
    def family() -> Property:
        return GraphFamilies.COMPLEMENT_HAMMING

    def check_image(self, target: Target, f: EndoMap, analysis: EndoAnalysis) -> Optional[str]:
        if not is_clique(target.get_params(), f.image()):
            return "image is not a clique"
        return None

    def check_class(self, target: Target, kernel_class: Clique) -> bool:
        layer = as_layer(target.get_params(), kernel_class.vertices)
        return layer is not None and layer.dimension == 1

    def expected_total(self, target: Target) -> int:
        params = target.get_params()
        m, n = params.m, params.n
        limits = target.get_context("limits")
        p1 = count_P1(m, n, limits).value
        return complement_hamming_count(m, n, p1, count_cubes(m - 1, n, 1, limits))


class ComplementCategoricalVerifier(ComplementVerifier):
    @staticmethod
    def name() -> str:
        return "complement_categorical"

    @staticmethod
    def full_name() -> str:
        return "hamendo.verifiers.ComplementCategoricalVerifier"

    @staticmethod
    def family() -> Property:
        return GraphFamilies.COMPLEMENT_CATEGORICAL

    def check_image(self, target: Target, f: EndoMap, analysis: EndoAnalysis) -> Optional[str]:
        m = target.get_params().m
        if analysis.layer_dim != m - 1:
            return f"image is not an {m - 1}-layer"
        return None

    def check_class(self, target: Target, kernel_class: Clique) -> bool:
        return classify_clique(target.get_params(), kernel_class).kind is CliqueKind.PERMUTATION_DIAGONAL

    def expected_total(self, target: Target) -> int:
        params = target.get_params()
        m, n = params.m, params.n
        p2 = count_P2(m, n, target.get_context("limits")).value
        return complement_catproduct_count(m, n, p2)
