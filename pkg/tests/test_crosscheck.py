import pytest

from hamendo.crosscheck import CROSSCHECKS, CrosscheckConfig, crosscheck
from hamendo.error import InvalidParamsError
from hamendo.formulas import Provenance
from hamendo.limits import Limits


@pytest.mark.parametrize(
    "quantity,parameters,expected",
    [
        ("thm3-total", {"m": 2, "n": 3}, 72),
        ("l2", {"n": 3}, 72),
        ("l2-complement", {"n": 3}, 72),
        ("p1", {"m": 3, "n": 4}, 45),
        ("rectangle", {"n1": 3, "n2": 2}, 24),
    ],
)
def test_formula_matches_search(quantity: str, parameters: dict, expected: int) -> None:
    report = crosscheck(quantity, parameters)
    assert report.formula_value == report.exhaustive_value == expected
    assert report.provenance == Provenance.BOTH
    assert report.match is True
    assert report.ok
    assert report.witness is None


@pytest.mark.parametrize("quantity", ["complement-hamming", "complement-catproduct"])
def test_complement_counts_with_samples(quantity: str) -> None:
    report = crosscheck(quantity, {"m": 2, "n": 3}, CrosscheckConfig(sample_size=25, seed=3))
    assert report.formula_value == report.exhaustive_value == 72
    assert report.match is True
    assert report.samples == 25
    assert report.sample_failures == 0
    assert any("seed 3" in note for note in report.notes)


def test_large_complement_counts_skip_the_search() -> None:
    report = crosscheck("complement-hamming", {"m": 3, "n": 3}, CrosscheckConfig(sample_size=10))
    assert report.formula_value == 91_445_760
    assert report.exhaustive_value is None
    assert report.provenance == Provenance.FORMULA
    assert report.match is None
    assert report.ok
    assert report.samples == 10

    report = crosscheck("complement-catproduct", {"m": 3, "n": 3})
    assert report.formula_value == 130_636_800
    assert report.exhaustive_value is None


def test_exhaustive_ceiling_is_configurable() -> None:
    report = crosscheck("l2", {"n": 3}, CrosscheckConfig(max_exhaustive=10))
    assert report.formula_value == 72
    assert report.exhaustive_value is None
    assert any("ceiling" in note for note in report.notes)


def test_literature_cube_counts() -> None:
    report = crosscheck("thm3-total", {"m": 2, "n": 3}, CrosscheckConfig(cube_counts={1: 6, 2: 12}))
    assert report.formula_value == 72
    # a wrong table shows up as a mismatch with a per-rank witness
    report = crosscheck("thm3-total", {"m": 2, "n": 3}, CrosscheckConfig(cube_counts={1: 6, 2: 11}))
    assert report.match is False
    assert not report.ok
    assert report.witness["ranks"] == {"3": {"formula": "66", "exhaustive": "72"}}


def test_limit_leaves_formula_only() -> None:
    report = crosscheck("p1", {"m": 3, "n": 4}, CrosscheckConfig(limits=Limits(max_nodes=5)))
    assert report.formula_value == 45
    assert report.exhaustive_value is None
    assert any("over limit" in note for note in report.notes)
    assert report.ok


def test_crosscheck_rejects() -> None:
    with pytest.raises(InvalidParamsError):
        crosscheck("nonsense", {})
    with pytest.raises(InvalidParamsError):
        crosscheck("l2", {})
    with pytest.raises(InvalidParamsError):
        crosscheck("l2", {"n": 2})
    with pytest.raises(InvalidParamsError):
        crosscheck("complement-hamming", {"m": 2, "n": 2})
    with pytest.raises(InvalidParamsError):
        crosscheck("p1", {"m": 4, "n": 3})
    assert sorted(CROSSCHECKS) == [
        "complement-catproduct",
        "complement-hamming",
        "l2",
        "l2-complement",
        "p1",
        "rectangle",
        "thm3-total",
    ]


def test_report_record() -> None:
    record = crosscheck("l2", {"n": 3}).to_dict()
    assert record["quantity"] == "l2"
    assert record["formula_value"] == "72"
    assert record["exhaustive_value"] == "72"
    assert record["provenance"] == "both"
    assert record["match"] is True


@pytest.mark.slow
def test_cube_lattice_total() -> None:
    report = crosscheck("thm3-total", {"m": 3, "n": 3}, CrosscheckConfig(jobs=2))
    assert report.formula_value == report.exhaustive_value == 4536
