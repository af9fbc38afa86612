import abc
import logging
from typing import Any, Dict, List, Optional

from hamendo.endomorphisms import (
    EndoAnalysis,
    EndomorphismSearch,
    SearchMode,
    SearchOptions,
    analyze,
)
from hamendo.error import ErrorBase, LimitError, LimitExceededError
from hamendo.limits import Limits
from hamendo.maps import EndoMap
from hamendo.settings import Property
from hamendo.skip import HamendoSkipped, SkipCategories
from hamendo.target import Target
from hamendo.violations import MapViolationDetails, Violation

logger = logging.getLogger("hamendo")


class VerifyResults:
    violations: List[Violation]
    errors: List[ErrorBase]
    skipped: List[HamendoSkipped]

    def __init__(
        self,
        violations: List[Violation],
        errors: List[ErrorBase],
        skipped: List[HamendoSkipped],
        observed_ranks: Optional[Dict[int, int]] = None,
        maps_checked: int = 0,
        partial: bool = False,
    ) -> None:
        self.violations = violations
        self.errors = errors
        self.skipped = skipped
        self.observed_ranks = observed_ranks or {}
        self.maps_checked = maps_checked
        self.partial = partial


class VerifierBase(metaclass=abc.ABCMeta):
    def __init__(
        self,
        settings: Dict[str, Any],
    ) -> None:
        self._settings: Dict[str, Any] = settings

    @staticmethod
    @abc.abstractmethod
    def name() -> str:
        raise NotImplementedError

    @staticmethod
    @abc.abstractmethod
    def full_name() -> str:
        raise NotImplementedError

    @staticmethod
    @abc.abstractmethod
    def family() -> Property:
        raise NotImplementedError

    @abc.abstractmethod
    def verify(
        self,
        target: Target,
    ) -> Optional[VerifyResults]:
        raise NotImplementedError

    def verifier_settings(self) -> Dict[str, Any]:
        verifiers: Dict[str, Any] = self._settings.get("verifiers", {})
        return verifiers.get(self.full_name(), {})

    def label_results(self, results: VerifyResults) -> VerifyResults:
        for violation in results.violations:
            violation.details.verifier = self.full_name()
        return results


class SingularMapVerifier(VerifierBase):
    """
    Streams the singular endomorphisms of the target and checks each one with
    ``check_map``. A cap in the verifier settings (or in the target's search
    options) stops the stream early and marks the run partial.
    """

    def verify(self, target: Target) -> Optional[VerifyResults]:
        if self.family().value not in target.family_values():
            return None

        results = self._verify(target)
        if target.get_context("informational"):
            results.skipped.append(
                HamendoSkipped(
                    self.name(),
                    SkipCategories.INFORMATIONAL,
                    f"observed ranks {sorted(results.observed_ranks)}; not asserted at this order",
                    target.get_source(),
                )
            )
            results.violations = []
        return self.label_results(results)

    def _options(self, target: Target) -> SearchOptions:
        options: Optional[SearchOptions] = target.get_context("search_options")
        if options is not None:
            return options
        cap = self.verifier_settings().get("cap") or None
        return SearchOptions(singular_only=True, mode=SearchMode.PROPERTY_CHECK, cap=cap)

    def _limits(self, target: Target) -> Limits:
        limits: Optional[Limits] = target.get_context("limits")
        return limits or Limits()

    def _verify(self, target: Target) -> VerifyResults:
        params = target.get_params()
        results = VerifyResults([], [], [])
        search = EndomorphismSearch(params, self._options(target), self._limits(target))
        try:
            for f in search.stream():
                results.maps_checked += 1
                analysis = analyze(params, f)
                results.observed_ranks[analysis.rank] = results.observed_ranks.get(analysis.rank, 0) + 1
                results.violations.extend(self.check_map(target, f, analysis))
        except LimitExceededError as e:
            logger.warning("%s on %s stopped: %s", self.name(), target.get_source(), e)
            results.errors.append(LimitError(self.name(), str(e), target.get_source(), e.limit))
            results.skipped.append(
                HamendoSkipped(
                    self.name(),
                    SkipCategories.OVER_LIMIT,
                    f"{e.limit} reached after {results.maps_checked} maps",
                    target.get_source(),
                )
            )
            results.partial = True
            return results

        results.partial = search.tally.partial
        if results.partial:
            results.skipped.append(
                HamendoSkipped(
                    self.name(),
                    SkipCategories.PARTIAL_RUN,
                    f"stopped after {results.maps_checked} maps at the configured cap",
                    target.get_source(),
                )
            )
        results.violations.extend(self.check_totals(target, results))
        return results

    @abc.abstractmethod
    def check_map(self, target: Target, f: EndoMap, analysis: EndoAnalysis) -> List[Violation]:
        raise NotImplementedError

    def check_totals(self, target: Target, results: VerifyResults) -> List[Violation]:
        return []

    def violation(self, code: Property, target: Target, message: str, f: Optional[EndoMap] = None) -> Violation:
        return Violation(
            code,
            MapViolationDetails(message, target.get_source(), None if f is None else f.images),
        )
