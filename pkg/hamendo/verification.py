import importlib
import logging
from datetime import datetime
from typing import Any, Dict, Iterable, List, Optional, Union

from hamendo._version import __version__
from hamendo.endomorphisms import SearchOptions
from hamendo.error import ErrorBase, HamendoError, UnsupportedFamilyError, VerifierError
from hamendo.hamming import GraphParams
from hamendo.limits import Limits
from hamendo.middlewares.middleware import MiddlewareImportError, MiddlewarePipeline
from hamendo.settings import DEFAULT_SETTINGS
from hamendo.skip import HamendoSkipped, SkipCategories
from hamendo.target import Target
from hamendo.verifiers.verify import VerifierBase
from hamendo.violations import Violations

logger = logging.getLogger("hamendo")


class Verification:
    """
    Runs every enabled verifier over each target graph. Middlewares tag the
    target with its graph families first; a verifier only runs on targets of
    its family. Violations, errors and skips are collected, never raised.
    """

    def __init__(
        self,
        settings: Dict[str, Any] = DEFAULT_SETTINGS,
        limits: Optional[Limits] = None,
    ) -> None:
        # Output
        self._violations = Violations()
        self._errors: List[ErrorBase] = []
        self._init_errors: List[HamendoError] = []
        self._skipped: List[HamendoSkipped] = []
        self._verified: List[str] = []
        self._observed: Dict[str, Dict[str, Any]] = {}

        # Verifiers
        self._verifiers_to_run: List[type] = []
        self._settings: Dict[str, Any] = settings
        self._limits = limits or Limits.from_settings(settings.get("limits", {}))
        self._load_verifiers()
        self._load_middlewares()

    def _load_middlewares(self) -> None:
        try:
            self._middleware_pipeline = MiddlewarePipeline.from_settings(self._settings["middlewares"] or {})
        except MiddlewareImportError as e:
            logger.exception(e)
            self._middleware_pipeline = MiddlewarePipeline()
            self._init_errors.append(HamendoError(f"Error loading middlewares: {e}"))

    def _load_verifiers(self) -> None:
        for verifier_path, verifier_settings in self._settings["verifiers"].items():
            if not verifier_settings.get("enabled"):
                continue
            try:
                (modulename, classname) = verifier_path.rsplit(".", 1)
                imported_module = importlib.import_module(name=modulename, package=classname)

                verifier_class = getattr(imported_module, classname)
                self._verifiers_to_run.append(verifier_class)

            except Exception as e:
                logger.error("Error importing verifier %s", verifier_path)
                self._init_errors.append(HamendoError(f"Error importing verifier {verifier_path}: {e}"))

    def verify(
        self,
        graphs: Union[GraphParams, Iterable[GraphParams]],
        options: Optional[SearchOptions] = None,
    ) -> Dict[str, Any]:
        self._violations = Violations()
        self._errors = list(self._init_errors)
        self._skipped = []
        self._verified = []
        self._observed = {}

        targets = [graphs] if isinstance(graphs, GraphParams) else list(graphs)
        for params in targets:
            target = Target(params)
            target.set_context("limits", self._limits)
            if options is not None:
                target.set_context("search_options", options)
            self._middleware_pipeline.run(target)
            self._verify_target(target)

        return self._generate_results()

    def _verify_target(self, target: Target) -> bool:
        verified = False
        for verifier_class in self._verifiers_to_run:
            verifier: VerifierBase = verifier_class(self._settings)

            try:
                results = verifier.verify(target)
            except Exception as e:
                logger.error(
                    "Error encountered from verifier %s on %s: %s",
                    verifier.full_name(),
                    target.get_source(),
                    e,
                )
                self._errors.append(VerifierError(verifier.full_name(), str(e), target.get_source()))
                continue

            if results is None:
                continue

            verified = True
            logger.info(
                "Verified %s with %s: %d maps, %d violations",
                target.get_source(),
                verifier.full_name(),
                results.maps_checked,
                len(results.violations),
            )
            self._observed[f"{target.get_source()}|{verifier.name()}"] = {
                "graph": target.get_source(),
                "verifier": verifier.full_name(),
                "maps_checked": results.maps_checked,
                "observed_ranks": {str(rank): count for rank, count in sorted(results.observed_ranks.items())},
                "partial": results.partial,
            }
            self._errors.extend(results.errors)
            self._violations.add_violations(results.violations)
            self._skipped.extend(results.skipped)

        if verified:
            self._verified.append(target.get_source())
        else:
            self._skipped.append(
                HamendoSkipped(
                    "hamendo",
                    SkipCategories.FAMILY_NOT_SUPPORTED,
                    "No verifier covers this graph family",
                    target.get_source(),
                )
            )
        return verified

    def _generate_results(self) -> Dict[str, Any]:
        report: Dict[str, Any] = {}

        violations_by_code = self._violations.group_by_code()
        report["summary"] = {
            "total_violations_by_code": {code: len(found) for code, found in sorted(violations_by_code.items())},
            "total_violations": len(self._violations),
            "hamendo_version": __version__,
            "timestamp": datetime.now().isoformat(),
            "verified": {"total_verified": len(self._verified), "verified_graphs": list(self._verified)},
        }
        report["runs"] = list(self._observed.values())
        report["violations"] = [
            {"code": violation.code.name, **violation.details.output_json()}
            for violation in self._violations.all_violations
        ]
        report["errors"] = [error.to_dict() for error in self._errors]
        report["summary"]["skipped"] = {
            "total_skipped": len(self._skipped),
            "skipped_graphs": [skipped.to_dict() for skipped in self._skipped],
        }
        return report

    def generate_report(self) -> Optional[str]:
        reporting_module = self._settings["reporting"]["module"]
        report_settings = self._settings["reporting"]["settings"]

        verification_report = None
        try:
            (modulename, classname) = reporting_module.rsplit(".", 1)
            imported_module = importlib.import_module(name=modulename, package=classname)

            report_class = getattr(imported_module, classname)
            verification_report = report_class.generate(verification=self, settings=report_settings)

        except Exception as e:
            logger.error("Error generating report using %s: %s", reporting_module, e)
            self._errors.append(HamendoError(f"Error generating report using {reporting_module}: {e}"))

        return verification_report

    @property
    def violations(self) -> Violations:
        return self._violations

    @property
    def errors(self) -> List[ErrorBase]:
        return self._errors

    @property
    def verified(self) -> List[str]:
        return self._verified

    @property
    def skipped(self) -> List[HamendoSkipped]:
        return self._skipped

    @property
    def runs(self) -> List[Dict[str, Any]]:
        return list(self._observed.values())


def verify_structure_theorem(
    params: GraphParams,
    options: Optional[SearchOptions] = None,
    settings: Dict[str, Any] = DEFAULT_SETTINGS,
    limits: Optional[Limits] = None,
) -> Dict[str, Any]:
    """Run the verifiers of every family ``params`` belongs to and return the report."""
    verification = Verification(settings, limits)
    report = verification.verify(params, options)
    if not verification.verified:
        raise UnsupportedFamilyError(f"no structure theorem covers {params}")
    return report
