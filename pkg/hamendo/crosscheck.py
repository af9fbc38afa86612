"""
Formula-versus-search cross-checks.

Each check computes a closed-form count and, when the search fits the
configured limits, the same count by exhaustive enumeration. The two values
always both appear in the resulting ``CountReport``; the match flag is only
set when both were computed. Counts too large to enumerate fall back to the
formula alone, optionally spot-validated by sampling constructed maps.
"""

import logging
import random
import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Mapping, Optional

from hamendo.cliques import count_P1, count_P2, p1_closed_form
from hamendo.endomorphisms import (
    SearchOptions,
    count_endomorphisms,
    decompose,
    enumerate_endomorphisms,
    is_endomorphism,
    sample_colourings,
)
from hamendo.error import InvalidParamsError, LimitExceededError, StructureError
from hamendo.formulas import (
    CountReport,
    complement_catproduct_count,
    complement_hamming_count,
    l2_complement_count,
    l2_count,
    rectangle_count,
    theorem3_histogram,
)
from hamendo.hamming import GraphParams
from hamendo.latin import count_cubes, count_cuboids, count_table
from hamendo.limits import Limits

logger = logging.getLogger("hamendo")

DEFAULT_MAX_EXHAUSTIVE = 10_000_000


@dataclass(frozen=True)
class CrosscheckConfig:
    limits: Limits = Limits()
    jobs: int = 1
    sample_size: int = 0
    seed: int = 0
    # formula values above this are never enumerated
    max_exhaustive: int = DEFAULT_MAX_EXHAUSTIVE
    cube_counts: Optional[Mapping[int, int]] = None


def _require(parameters: Mapping[str, Any], *names: str) -> List[int]:
    missing = [name for name in names if name not in parameters]
    if missing:
        raise InvalidParamsError(f"missing parameters {missing}")
    return [int(parameters[name]) for name in names]


def _singular_histogram(params: GraphParams, config: CrosscheckConfig, report: CountReport) -> Optional[Dict[int, int]]:
    if report.formula_value is not None and report.formula_value > config.max_exhaustive:
        report.notes.append(
            f"formula value exceeds the exhaustive ceiling {config.max_exhaustive}; search skipped"
        )
        return None
    options = SearchOptions(singular_only=True, use_symmetry=True)
    try:
        tally = count_endomorphisms(params, options, config.limits, config.jobs)
    except LimitExceededError as e:
        logger.warning("Exhaustive side of %s stopped: %s", report.quantity, e)
        report.notes.append(f"exhaustive side over limit: {e}")
        return None
    report.nodes += tally.nodes
    return tally.by_rank


def _sample(params: GraphParams, config: CrosscheckConfig, report: CountReport, rank: int) -> None:
    if config.sample_size <= 0:
        return
    rng = random.Random(config.seed)
    for f in sample_colourings(params, config.sample_size, rng, config.limits):
        report.samples += 1
        if not is_endomorphism(params, f) or not f.is_singular or f.rank != rank:
            report.sample_failures += 1
            if report.witness is None:
                report.witness = {"map": list(f.images)}
    report.notes.append(f"{report.samples} constructed maps sampled with seed {config.seed}")


def _decomposition_witness(params: GraphParams, rank: int, limits: Limits) -> Optional[List[int]]:
    options = SearchOptions(singular_only=True, rank_filter=frozenset({rank}))
    for f in enumerate_endomorphisms(params, options, limits):
        try:
            decompose(params, f)
        except StructureError:
            return list(f.images)
    return None


def thm3_total(parameters: Mapping[str, Any], config: CrosscheckConfig) -> CountReport:
    m, n = _require(parameters, "m", "n")
    params = GraphParams.hamming(m, n)
    cube_counts = dict(config.cube_counts or count_table(m, n, 1, config.limits, config.jobs))
    histogram = theorem3_histogram(m, n, cube_counts)
    report = CountReport("thm3-total", {"m": m, "n": n}, formula_value=sum(histogram.values()))
    by_rank = _singular_histogram(params, config, report)
    if by_rank is None:
        return report
    report.exhaustive_value = sum(by_rank.values())
    differing = {
        str(rank): {"formula": str(histogram.get(rank, 0)), "exhaustive": str(by_rank.get(rank, 0))}
        for rank in sorted(set(histogram) | set(by_rank))
        if histogram.get(rank, 0) != by_rank.get(rank, 0)
    }
    if differing:
        report.witness = {"ranks": differing}
        first = min(int(rank) for rank in differing)
        try:
            found = _decomposition_witness(params, first, config.limits)
        except LimitExceededError:
            found = None
        if found is not None:
            report.witness["map"] = found
    return report


def l2(parameters: Mapping[str, Any], config: CrosscheckConfig) -> CountReport:
    (n,) = _require(parameters, "n")
    ls_count = count_cubes(2, n, 1, config.limits, config.jobs)
    report = CountReport("l2", {"n": n}, formula_value=l2_count(n, ls_count))
    by_rank = _singular_histogram(GraphParams.hamming(2, n), config, report)
    if by_rank is not None:
        report.exhaustive_value = sum(by_rank.values())
    return report


def l2_complement(parameters: Mapping[str, Any], config: CrosscheckConfig) -> CountReport:
    (n,) = _require(parameters, "n")
    params = GraphParams.hamming(2, n, (2,))
    report = CountReport("l2-complement", {"n": n}, formula_value=l2_complement_count(n))
    by_rank = _singular_histogram(params, config, report)
    if by_rank is not None:
        report.exhaustive_value = sum(by_rank.values())
    return report


def p1(parameters: Mapping[str, Any], config: CrosscheckConfig) -> CountReport:
    m, n = _require(parameters, "m", "n")
    closed = p1_closed_form(m, n)
    if closed is None:
        raise InvalidParamsError(f"P1({m}, {n}) has no closed form to check against")
    report = CountReport("p1", {"m": m, "n": n}, formula_value=closed)
    try:
        counted = count_P1(m, n, config.limits, config.jobs)
    except LimitExceededError as e:
        report.notes.append(f"exhaustive side over limit: {e}")
        return report
    report.exhaustive_value = counted.value
    report.nodes = counted.nodes
    return report


def complement_hamming(parameters: Mapping[str, Any], config: CrosscheckConfig) -> CountReport:
    m, n = _require(parameters, "m", "n")
    if n < 3:
        raise InvalidParamsError(f"the complement counts need n >= 3, got {n}")
    params = GraphParams.hamming(m, n, range(2, m + 1))
    p1_value = count_P1(m, n, config.limits, config.jobs).value
    lhc = count_cubes(m - 1, n, 1, config.limits, config.jobs)
    report = CountReport(
        "complement-hamming",
        {"m": m, "n": n},
        formula_value=complement_hamming_count(m, n, p1_value, lhc),
    )
    by_rank = _singular_histogram(params, config, report)
    if by_rank is not None:
        report.exhaustive_value = sum(by_rank.values())
    _sample(params, config, report, n ** (m - 1))
    return report


def complement_catproduct(parameters: Mapping[str, Any], config: CrosscheckConfig) -> CountReport:
    m, n = _require(parameters, "m", "n")
    if n < 3:
        raise InvalidParamsError(f"the complement counts need n >= 3, got {n}")
    params = GraphParams.hamming(m, n, range(1, m))
    p2_value = count_P2(m, n, config.limits, config.jobs).value
    report = CountReport(
        "complement-catproduct",
        {"m": m, "n": n},
        formula_value=complement_catproduct_count(m, n, p2_value),
    )
    by_rank = _singular_histogram(params, config, report)
    if by_rank is not None:
        report.exhaustive_value = sum(by_rank.values())
    _sample(params, config, report, n ** (m - 1))
    return report


def rectangle(parameters: Mapping[str, Any], config: CrosscheckConfig) -> CountReport:
    n1, n2 = _require(parameters, "n1", "n2")
    lr = count_cuboids((n1, n2), 1, config.limits, config.jobs)
    report = CountReport("rectangle", {"n1": n1, "n2": n2}, formula_value=rectangle_count(n1, n2, lr))
    by_rank = _singular_histogram(GraphParams.cuboid((n1, n2)), config, report)
    if by_rank is not None:
        report.exhaustive_value = sum(by_rank.values())
    return report


CROSSCHECKS: Dict[str, Callable[[Mapping[str, Any], CrosscheckConfig], CountReport]] = {
    "thm3-total": thm3_total,
    "l2": l2,
    "l2-complement": l2_complement,
    "p1": p1,
    "complement-hamming": complement_hamming,
    "complement-catproduct": complement_catproduct,
    "rectangle": rectangle,
}


def crosscheck(
    quantity: str,
    parameters: Mapping[str, Any],
    config: Optional[CrosscheckConfig] = None,
) -> CountReport:
    if quantity not in CROSSCHECKS:
        raise InvalidParamsError(f"unknown quantity {quantity}; choose from {sorted(CROSSCHECKS)}")
    config = config or CrosscheckConfig()
    started = time.monotonic()
    report = CROSSCHECKS[quantity](parameters, config)
    report.seconds = time.monotonic() - started
    if report.match is False:
        logger.error(
            "%s %s: formula %s, exhaustive %s",
            quantity,
            dict(parameters),
            report.formula_value,
            report.exhaustive_value,
        )
    else:
        logger.info("%s %s: %s (%s)", quantity, dict(parameters), report.formula_value, report.provenance)
    return report
