import math

import pytest

from hamendo.error import InvalidParamsError
from hamendo.formulas import (
    CountReport,
    Provenance,
    aut_hamming_count,
    complement_catproduct_count,
    complement_hamming_count,
    h_k,
    l2_complement_count,
    l2_count,
    rectangle_count,
    set_partitions,
    stirling2,
    theorem3_count,
    theorem3_histogram,
)

CUBES_N3 = {1: 6, 2: 12, 3: 24, 4: 48}


def test_set_partitions() -> None:
    partitions = list(set_partitions(4, 2))
    assert len(partitions) == stirling2(4, 2) == 7
    assert len({p.parts for p in partitions}) == 7
    for partition in partitions:
        assert sorted(i for part in partition.parts for i in part) == [0, 1, 2, 3]
        assert partition.k == 2
    assert [p.to_list() for p in set_partitions(2, 1)] == [[[1, 2]]]
    assert sum(1 for _ in set_partitions(5, 3)) == stirling2(5, 3) == 25
    with pytest.raises(InvalidParamsError):
        list(set_partitions(3, 4))


def test_layer_counts() -> None:
    assert h_k(3, 3, 1) == 27
    assert h_k(4, 3, 2) == 54
    assert h_k(3, 3, 3) == 1
    with pytest.raises(InvalidParamsError):
        h_k(3, 3, 4)


def test_theorem3_four_three() -> None:
    assert theorem3_count(4, 3, 1, CUBES_N3) == 5184
    assert theorem3_count(4, 3, 2, CUBES_N3) == 108864
    assert theorem3_count(4, 3, 3, CUBES_N3) == 186624
    assert sum(theorem3_histogram(4, 3, CUBES_N3).values()) == 300672


def test_theorem3_three_three() -> None:
    assert theorem3_histogram(3, 3, CUBES_N3) == {3: 648, 9: 3888}


def test_theorem3_rejects() -> None:
    with pytest.raises(InvalidParamsError):
        theorem3_count(3, 3, 0, CUBES_N3)
    with pytest.raises(InvalidParamsError):
        theorem3_count(3, 3, 3, CUBES_N3)
    with pytest.raises(InvalidParamsError):
        theorem3_count(4, 3, 1, {1: 6, 2: 12, 3: 24})


def test_lattice_and_complement_formulas() -> None:
    assert l2_count(3, 12) == 72
    assert l2_count(4, 576) == 2 * 4 * 576
    assert l2_complement_count(3) == 72
    assert l2_complement_count(4) == 1152
    assert complement_hamming_count(3, 3, 21, 12) == 91_445_760
    assert complement_catproduct_count(3, 3, 40) == 130_636_800
    # m = 2: P1 = 2 line tilings, 3! permutations as image cliques
    assert complement_hamming_count(2, 3, 2, 6) == l2_complement_count(3)
    with pytest.raises(InvalidParamsError):
        l2_count(2, 2)
    with pytest.raises(InvalidParamsError):
        l2_complement_count(2)


def test_rectangle_and_automorphisms() -> None:
    assert rectangle_count(3, 2, 12) == 24
    assert rectangle_count(4, 2, 216) == 432
    with pytest.raises(InvalidParamsError):
        rectangle_count(3, 3, 12)
    with pytest.raises(InvalidParamsError):
        rectangle_count(2, 3, 12)
    assert aut_hamming_count(3, 3) == 1296
    assert aut_hamming_count(4, 3) == 31104
    assert aut_hamming_count(2, 3) == math.factorial(3) ** 2 * 2


def test_count_report() -> None:
    report = CountReport("l2", {"n": 3}, formula_value=72)
    assert report.provenance == Provenance.FORMULA
    assert report.match is None
    assert report.ok

    report.exhaustive_value = 72
    assert report.provenance == Provenance.BOTH
    assert report.match is True
    record = report.to_dict()
    assert record["formula_value"] == "72"
    assert record["match"] is True

    report.exhaustive_value = 71
    assert report.match is False
    assert not report.ok

    report = CountReport("l2", {"n": 3}, exhaustive_value=72, sample_failures=1)
    assert report.provenance == Provenance.EXHAUSTIVE
    assert not report.ok
    assert CountReport("l2", {}).provenance is None
