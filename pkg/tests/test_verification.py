import copy
import json
from pathlib import Path
from typing import Any, Dict

import pytest

from hamendo.endomorphisms import SearchOptions
from hamendo.error import InvalidParamsError, UnsupportedFamilyError
from hamendo.hamming import GraphParams
from hamendo.limits import Limits
from hamendo.middlewares.family_via_distances import detect_families
from hamendo.settings import (
    DEFAULT_SETTINGS,
    GraphFamilies,
    RunConfig,
    SettingsUtils,
    literature_cube_counts,
)
from hamendo.skip import SkipCategories
from hamendo.suites import SuiteEntry, SuiteResult, run_suite
from hamendo.verification import Verification, verify_structure_theorem
from hamendo.verifiers.cuboid.verify import allowed_ranks


def settings_copy() -> Dict[str, Any]:
    return copy.deepcopy(DEFAULT_SETTINGS)


def skipped_categories(verification: Verification) -> set:
    return {skipped.category.name for skipped in verification.skipped}


def test_detect_families() -> None:
    assert detect_families(GraphParams.from_text("3x3")) == [
        GraphFamilies.HAMMING,
        GraphFamilies.COMPLEMENT_CATEGORICAL,
    ]
    assert detect_families(GraphParams.from_text("3x3:S=2")) == [
        GraphFamilies.CATEGORICAL,
        GraphFamilies.COMPLEMENT_HAMMING,
    ]
    assert detect_families(GraphParams.from_text("3x3x3:S=1,2")) == [
        GraphFamilies.DISTANCE_RANGE,
        GraphFamilies.COMPLEMENT_CATEGORICAL,
    ]
    assert detect_families(GraphParams.from_text("3x3x3:S=2")) == []
    assert detect_families(GraphParams.from_text("3x2")) == [GraphFamilies.CUBOID]
    assert detect_families(GraphParams.from_text("3x2:S=2")) == []


@pytest.mark.parametrize("text", ["3x2", "3x3", "3x3:S=2"])
def test_small_graphs_verify_clean(text: str) -> None:
    verification = Verification()
    report = verification.verify(GraphParams.from_text(text))
    assert len(verification.violations) == 0
    assert verification.errors == []
    source = GraphParams.from_text(text).to_text()
    assert verification.verified == [source]
    assert report["summary"]["total_violations"] == 0
    assert report["summary"]["verified"]["verified_graphs"] == [source]
    for run in report["runs"]:
        assert run["graph"] == source
        assert not run["partial"]


def test_rectangle_runs() -> None:
    verification = Verification()
    verification.verify(GraphParams.from_text("3x2"))
    (run,) = verification.runs
    assert run["verifier"] == "hamendo.verifiers.CuboidVerifier"
    assert run["maps_checked"] == 24
    assert run["observed_ranks"] == {"3": 24}
    assert allowed_ranks([3, 2]) == {3}
    assert allowed_ranks([4, 3, 2]) == {4, 12, 8}


def test_unsupported_family_is_skipped() -> None:
    verification = Verification()
    report = verification.verify(GraphParams.from_text("3x3x3:S=2"))
    assert verification.verified == []
    assert skipped_categories(verification) == {SkipCategories.FAMILY_NOT_SUPPORTED.name}
    assert report["summary"]["skipped"]["total_skipped"] == 1
    with pytest.raises(UnsupportedFamilyError):
        verify_structure_theorem(GraphParams.from_text("3x3x3:S=2"))


def test_structure_theorem_report() -> None:
    report = verify_structure_theorem(GraphParams.from_text("3x3"))
    assert report["summary"]["total_violations"] == 0
    assert {run["verifier"] for run in report["runs"]} == {
        "hamendo.verifiers.HammingVerifier",
        "hamendo.verifiers.ComplementCategoricalVerifier",
    }


def test_small_order_is_informational() -> None:
    verification = Verification()
    verification.verify(GraphParams.from_text("2x2"))
    assert len(verification.violations) == 0
    assert SkipCategories.INFORMATIONAL.name in skipped_categories(verification)
    assert verification.verified == ["2x2:S=1"]


def test_limit_becomes_error() -> None:
    verification = Verification(limits=Limits(max_nodes=50))
    verification.verify(GraphParams.from_text("3x3"))
    assert verification.errors
    assert {error.name() for error in verification.errors} == {"LIMIT"}
    assert all(run["partial"] for run in verification.runs)
    assert SkipCategories.OVER_LIMIT.name in skipped_categories(verification)


def test_cap_marks_partial_run() -> None:
    verification = Verification()
    verification.verify(GraphParams.from_text("3x3"), SearchOptions(singular_only=True, cap=5))
    assert SkipCategories.PARTIAL_RUN.name in skipped_categories(verification)
    assert all(run["maps_checked"] == 5 for run in verification.runs)
    assert len(verification.violations) == 0


def test_uncapped_verifiers_are_the_exhaustive_ones() -> None:
    uncapped = {path for path, conf in DEFAULT_SETTINGS["verifiers"].items() if not conf.get("cap")}
    assert uncapped == {"hamendo.verifiers.HammingVerifier", "hamendo.verifiers.CuboidVerifier"}
    assert DEFAULT_SETTINGS["verifiers"]["hamendo.verifiers.DistanceRangeVerifier"]["cap"] == 100_000


def capped_settings(cap: int) -> Dict[str, Any]:
    settings = settings_copy()
    for conf in settings["verifiers"].values():
        if conf.get("cap"):
            conf["cap"] = cap
    return settings


def test_categorical_product_capped_run() -> None:
    verification = Verification(capped_settings(300))
    verification.verify(GraphParams.from_text("3x3x3:S=3"))
    assert len(verification.violations) == 0
    assert verification.errors == []
    (run,) = verification.runs
    assert run["verifier"] == "hamendo.verifiers.CategoricalProductVerifier"
    assert run["partial"]
    assert run["maps_checked"] == 300
    assert set(run["observed_ranks"]) <= {"3", "9"}
    assert SkipCategories.PARTIAL_RUN.name in skipped_categories(verification)


def test_distance_range_capped_run() -> None:
    verification = Verification(capped_settings(200))
    verification.verify(GraphParams.from_text("3x3x3:S=1,2"))
    assert len(verification.violations) == 0
    assert verification.errors == []
    runs = {run["verifier"]: run for run in verification.runs}
    assert set(runs) == {
        "hamendo.verifiers.DistanceRangeVerifier",
        "hamendo.verifiers.ComplementCategoricalVerifier",
    }
    for run in runs.values():
        assert run["partial"]
        assert run["maps_checked"] == 200
        assert set(run["observed_ranks"]) == {"9"}


@pytest.mark.slow
def test_distance_range_with_constructed_colourings() -> None:
    settings = capped_settings(1000)
    settings["seed"] = 5
    settings["verifiers"]["hamendo.verifiers.ComplementCategoricalVerifier"]["samples"] = 1000
    verification = Verification(settings)
    verification.verify(GraphParams.from_text("3x3x3:S=1,2"))
    assert len(verification.violations) == 0
    assert verification.errors == []
    assert verification.verified == ["3x3x3:S=1,2"]


@pytest.mark.slow
def test_hamming_cube_every_map() -> None:
    verification = Verification()
    verification.verify(GraphParams.from_text("3x3x3"))
    assert len(verification.violations) == 0
    assert verification.errors == []
    (run,) = verification.runs
    assert not run["partial"]
    assert run["maps_checked"] == 4536
    assert run["observed_ranks"] == {"3": 648, "9": 3888}


def test_bad_verifier_path() -> None:
    settings = settings_copy()
    settings["verifiers"]["hamendo.verifiers.NoSuchVerifier"] = {"enabled": True}
    verification = Verification(settings)
    verification.verify(GraphParams.from_text("3x2"))
    assert any("NoSuchVerifier" in error.message for error in verification.errors)
    assert verification.verified == ["3x2:S=1"]


def test_disabled_verifier_is_not_loaded() -> None:
    settings = settings_copy()
    settings["verifiers"]["hamendo.verifiers.CuboidVerifier"]["enabled"] = False
    verification = Verification(settings)
    verification.verify(GraphParams.from_text("3x2"))
    assert verification.verified == []
    assert skipped_categories(verification) == {SkipCategories.FAMILY_NOT_SUPPORTED.name}


def test_bad_middleware_path() -> None:
    settings = settings_copy()
    settings["middlewares"] = {"hamendo.middlewares.NoSuchMiddleware": {}}
    verification = Verification(settings)
    verification.verify(GraphParams.from_text("3x3"))
    assert any("middlewares" in error.message for error in verification.errors)
    # without middlewares no family is detected
    assert verification.verified == []


def test_json_report(tmp_path: Path) -> None:
    output = tmp_path / "report.json"
    settings = settings_copy()
    settings["reporting"] = {
        "module": "hamendo.reports.JSONReport",
        "settings": {"output_file": str(output), "show_skipped": True},
    }
    verification = Verification(settings)
    verification.verify(GraphParams.from_text("3x2"))
    verification.generate_report()
    report = json.loads(output.read_text())
    assert report["summary"]["total_violations"] == 0
    assert report["summary"]["verified"]["total_verified"] == 1
    assert report["summary"]["skipped"]["total_skipped"] == 0
    assert report["runs"][0]["maps_checked"] == 24


def test_bad_report_module() -> None:
    settings = settings_copy()
    settings["reporting"]["module"] = "hamendo.reports.NoSuchReport"
    verification = Verification(settings)
    verification.verify(GraphParams.from_text("3x2"))
    assert verification.generate_report() is None
    assert any("NoSuchReport" in error.message for error in verification.errors)


def test_settings_round_trip(tmp_path: Path) -> None:
    path = tmp_path / "hamendo-settings.toml"
    path.write_text(SettingsUtils.get_default_settings_as_toml())
    assert SettingsUtils.load(path) == DEFAULT_SETTINGS


def test_run_config() -> None:
    config = RunConfig.from_settings(DEFAULT_SETTINGS)
    assert config.limits == Limits()
    assert config.jobs == 1
    assert config.sample_size == 1000

    config = RunConfig.from_settings(DEFAULT_SETTINGS, seed=9, jobs=2, max_nodes=100, out="x.jsonl")
    assert config.seed == 9
    assert config.jobs == 2
    assert config.limits.max_nodes == 100
    assert config.out == "x.jsonl"
    assert config.to_dict()["limits"]["max_nodes"] == 100

    with pytest.raises(InvalidParamsError):
        RunConfig(jobs=0)
    with pytest.raises(InvalidParamsError):
        Limits(max_nodes=0)


def test_literature_cube_counts() -> None:
    assert literature_cube_counts(DEFAULT_SETTINGS, 3) == {1: 6, 2: 12, 3: 24, 4: 48}
    assert literature_cube_counts(DEFAULT_SETTINGS, 4)[2] == 576
    with pytest.raises(InvalidParamsError):
        literature_cube_counts(DEFAULT_SETTINGS, 7)


def test_structure_suite() -> None:
    result = run_suite("structure")
    assert result.passed
    assert result.verification is not None
    assert result.verification.verified == ["3x3:S=1", "3x3:S=2", "3x2:S=1"]


def test_suite_result() -> None:
    result = SuiteResult("t", [SuiteEntry("p1", {"m": 3, "n": 3}, 21, 21), SuiteEntry("p1", {"m": 3, "n": 4}, 45, 44)])
    assert [entry.observed for entry in result.failures] == [44]
    assert not result.passed
    assert result.entries[0].to_dict()["expected"] == "21"
    with pytest.raises(InvalidParamsError):
        run_suite("nonsense")


def test_suite_limit() -> None:
    result = run_suite("structure", RunConfig(limits=Limits(max_nodes=50)))
    assert result.limit_hit
    assert not result.passed


@pytest.mark.slow
def test_acceptance_suite() -> None:
    result = run_suite("paper-tables", RunConfig(jobs=2))
    assert result.failures == []
    assert result.passed
    quantities = {entry.quantity for entry in result.entries}
    assert {
        "lhc",
        "thm3",
        "p1",
        "p2",
        "crosscheck:thm3-total",
        "cliques:latin-squares",
        "cliques:mds",
        "cliques:permutation-diagonals",
        "round-trip:all",
        "round-trip:sampled:distinct-maps",
        "rectangle:brute-force",
    } <= quantities
    observed = {(entry.quantity, str(entry.parameters)): entry.observed for entry in result.entries}
    assert observed[("crosscheck:thm3-total", str({"m": 3, "n": 3}))] == 4536
    assert observed[("rectangle:brute-force", str({"n1": 3, "n2": 2}))] == 24

    assert result.verification is not None
    assert result.verification.verified == [
        "3x3:S=1",
        "3x3x3:S=1",
        "3x3:S=2",
        "3x3x3:S=3",
        "3x3x3:S=1,2",
        "3x2:S=1",
    ]
    partial = {run["graph"] for run in result.verification.runs if run["partial"]}
    assert "3x3x3:S=1,2" in partial
    assert partial <= {"3x3x3:S=3", "3x3x3:S=1,2"}


def test_acceptance_suite_is_registered() -> None:
    with pytest.raises(InvalidParamsError):
        run_suite("published-tables")
    result = run_suite("paper-tables", RunConfig(limits=Limits(max_nodes=5)))
    assert result.limit_hit
    assert not result.passed
