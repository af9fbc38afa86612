import logging
import os
import sys
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path
from typing import IO, Any, Dict, Optional, Sequence, Tuple

import click

from hamendo._version import __version__
from hamendo.cliques import (
    classify_clique,
    count_P1,
    count_P2,
    maximal_cliques,
    mds_parameters,
)
from hamendo.crosscheck import CROSSCHECKS, CrosscheckConfig, crosscheck
from hamendo.endomorphisms import (
    EndomorphismSearch,
    SearchMode,
    SearchOptions,
    SearchTally,
    analyze,
)
from hamendo.error import (
    HamendoException,
    InvalidParamsError,
    LimitExceededError,
    NotAnEndomorphismError,
    StructureError,
    UnsupportedFamilyError,
)
from hamendo.formulas import aut_hamming_count, theorem3_count, theorem3_histogram
from hamendo.hamming import GraphParams, adjacency_masks, edge_count, layer_count, popcount
from hamendo.latin import count_cubes, count_cuboids, enumerate_cubes, enumerate_cuboids, load_cube, validate_cube
from hamendo.limits import check_vertex_limit
from hamendo.middlewares.family_via_distances import detect_families
from hamendo.reports import JSONLinesWriter, emit_table, print_suite
from hamendo.settings import (
    DEFAULT_REPORTING_MODULES,
    DEFAULT_SETTINGS,
    DEFAULT_SETTINGS_FILE,
    RunConfig,
    SettingsUtils,
    literature_cube_counts,
)
from hamendo.suites import SUITES, SuiteResult, run_suite
from hamendo.tools.cli_utils import GRAPH, INT_LIST, DefaultGroup
from hamendo.verification import Verification

logger = logging.getLogger("hamendo")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATIONS = 2
EXIT_LIMITS = 3

CONTEXT_SETTINGS = dict(help_option_names=["-h", "--help"])

_log_handler: Optional[logging.Handler] = None


@dataclass
class CliState:
    config: RunConfig
    settings: Dict[str, Any]
    stream: IO[str]

    def writer(self, command: str, params: Dict[str, Any]) -> JSONLinesWriter:
        writer = JSONLinesWriter(self.stream, self.config.canonical)
        writer.header(command, params, self.config.to_dict())
        return writer


def _configure_logging(level: str) -> None:
    global _log_handler
    _release_logging()
    _log_handler = logging.StreamHandler(stream=sys.stderr)
    logger.addHandler(_log_handler)
    logger.setLevel(getattr(logging, level))


def _release_logging() -> None:
    global _log_handler
    if _log_handler is not None:
        logger.removeHandler(_log_handler)
        _log_handler = None


def _load_settings(settings_file: Optional[str]) -> Dict[str, Any]:
    settings_file_path = Path(settings_file if settings_file else f"{os.getcwd()}/{DEFAULT_SETTINGS_FILE}")
    if settings_file_path.is_file():
        logger.info("Detected settings file. Using %s", settings_file_path)
        return SettingsUtils.load(settings_file_path)
    logger.debug("No settings file detected at %s. Using defaults.", settings_file_path)
    return DEFAULT_SETTINGS


def _verification_exit(verification: Verification) -> int:
    if len(verification.violations) > 0:
        return EXIT_VIOLATIONS
    if any(error.name() == "LIMIT" for error in verification.errors):
        return EXIT_LIMITS
    # verifier crashes leave the theorem unconfirmed
    if verification.errors:
        return EXIT_VIOLATIONS
    return EXIT_OK


def _suite_exit(result: SuiteResult) -> int:
    if result.failures or result.violation_count:
        return EXIT_VIOLATIONS
    if result.limit_hit:
        return EXIT_LIMITS
    if result.verification is not None:
        return _verification_exit(result.verification)
    return EXIT_OK


def _search_options(
    singular: bool, ranks: Tuple[int, ...], cap: Optional[int], state: CliState, mode: SearchMode
) -> SearchOptions:
    return SearchOptions(
        singular_only=singular,
        rank_filter=frozenset(ranks) if ranks else None,
        mode=mode,
        cap=cap,
        canonical_order=state.config.canonical,
    )


def _tally_record(params: GraphParams, tally: SearchTally) -> Dict[str, Any]:
    return {
        "record": "count",
        "graph": params.to_text(),
        "by_rank": {str(rank): str(count) for rank, count in sorted(tally.by_rank.items())},
        "total": str(tally.total),
        "nodes_explored": tally.nodes,
        "seconds": round(tally.seconds, 3),
        "partial": tally.partial,
    }


@click.group(
    "cli",
    cls=DefaultGroup,
    default="verify",
    context_settings=CONTEXT_SETTINGS,
    help="""
    Hamendo enumerates the singular endomorphisms of generalized Hamming
    graphs and checks them against their structure theorems and counting
    formulas.

    Verification is the default action and runs the structure suite:
    `hamendo` or `hamendo verify --graph 3x3:S=2`

    Every other command writes JSON Lines, starting with a header record:
    `hamendo jenga p1 --m 3 --n 3`

    You can also create a configurable settings file using:
    `hamendo create-settings-file`

    """,
    default_if_no_args=True,
)
@click.version_option(__version__, "-v", "--version")
@click.option("--jobs", type=click.IntRange(min=1), default=None, help="Worker processes for counting searches.")
@click.option(
    "--limit-nodes",
    type=click.IntRange(min=1),
    default=None,
    help="Abort any search after this many nodes (exit code 3).",
)
@click.option(
    "--budget-seconds",
    type=click.FloatRange(min=0, min_open=True),
    default=None,
    help="Abort any search after this much wall-clock time (exit code 3).",
)
@click.option(
    "--canonical/--no-canonical",
    default=None,
    help="Deterministic order and timing-free output, byte-identical across runs.",
)
@click.option("--seed", type=int, default=None, help="Seed for sampling operations.")
@click.option(
    "--out",
    type=click.Path(dir_okay=False, writable=True),
    default=None,
    help="Write JSON Lines here instead of standard output.",
)
@click.option(
    "-l",
    "--log",
    type=click.Choice(["CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"]),
    default="INFO",
    help="level of log messages to display on standard error (default: INFO)",
)
@click.option(
    "--settings-file",
    type=click.Path(exists=True, dir_okay=False),
    help=f"Settings file to use. Defaults to ./{DEFAULT_SETTINGS_FILE}.",
)
@click.pass_context
def cli(
    ctx: click.Context,
    jobs: Optional[int],
    limit_nodes: Optional[int],
    budget_seconds: Optional[float],
    canonical: Optional[bool],
    seed: Optional[int],
    out: Optional[str],
    log: str,
    settings_file: Optional[str],
) -> None:
    _configure_logging(log)
    settings = _load_settings(settings_file)
    config = RunConfig.from_settings(
        settings,
        jobs=jobs,
        max_nodes=limit_nodes,
        budget_seconds=budget_seconds,
        canonical=canonical,
        seed=seed,
        out=out,
    )
    stream: IO[str] = sys.stdout
    if out is not None:
        stream = ctx.with_resource(open(out, mode="w", encoding="utf-8"))
    ctx.obj = CliState(config, settings, stream)


def _override_jobs(ctx: click.Context, _param: click.Parameter, jobs: Optional[int]) -> None:
    state = ctx.find_object(CliState)
    if jobs is not None and state is not None:
        state.config = replace(state.config, jobs=jobs)


jobs_option = click.option(
    "--jobs",
    type=click.IntRange(min=1),
    default=None,
    expose_value=False,
    callback=_override_jobs,
    help="Worker processes for this command; overrides the global --jobs.",
)


@cli.command(help="Describe a graph: size, degree, layer counts and families.")  # type: ignore
@click.option("-g", "--graph", "params", type=GRAPH, required=True, help="Graph such as 3x3x3:S=1,2")
@click.pass_obj
def graph(state: CliState, params: GraphParams) -> int:
    check_vertex_limit(params.vertex_count, state.config.limits.max_vertices)
    writer = state.writer("graph", params.to_dict())
    masks = adjacency_masks(params)
    writer.write(
        {
            "record": "graph",
            "graph": params.to_text(),
            "vertices": params.vertex_count,
            "edges": str(edge_count(params)),
            "degree": popcount(masks[0]),
            "layers": {str(k): str(layer_count(params, k)) for k in range(params.m + 1)},
            "complement": None if params.is_complete else params.complement().to_text(),
            "families": [family.value for family in detect_families(params)],
        }
    )
    return EXIT_OK


@cli.command(help="Enumerate the maximal cliques of a graph.")  # type: ignore
@click.option("-g", "--graph", "params", type=GRAPH, required=True, help="Graph such as 3x3:S=2,3")
@click.option("--classify", is_flag=True, default=False, help="Classify each clique by its shape.")
@click.option("--mds", is_flag=True, default=False, help="Report each clique's code parameters.")
@click.pass_obj
def cliques(state: CliState, params: GraphParams, classify: bool, mds: bool) -> int:
    writer = state.writer("cliques", {**params.to_dict(), "classify": classify, "mds": mds})
    sizes: Counter = Counter()
    kinds: Counter = Counter()
    for clique in maximal_cliques(params, state.config.limits):
        record: Dict[str, Any] = {"record": "clique", **clique.to_dict(params)}
        if classify:
            classification = classify_clique(params, clique)
            kinds[classification.kind.value] += 1
            record["classification"] = classification.to_dict()
        if mds:
            record["code"] = mds_parameters(params, clique).to_dict()
        sizes[len(clique)] += 1
        writer.write(record)
    writer.write(
        {
            "record": "summary",
            "cliques": sum(sizes.values()),
            "sizes": {str(size): count for size, count in sorted(sizes.items())},
            "kinds": dict(sorted(kinds.items())),
        }
    )
    return EXIT_OK


@cli.group(help="Count, enumerate and verify endomorphisms.")
def endos() -> None:
    pass


def _endo_options(function: Any) -> Any:
    options = [
        click.option("-g", "--graph", "params", type=GRAPH, required=True, help="Graph such as 3x3x3:S=1"),
        click.option("--singular", is_flag=True, default=False, help="Only non-bijective maps."),
        click.option("--rank", "ranks", type=click.IntRange(min=1), multiple=True, help="Keep only these ranks."),
        click.option("--cap", type=click.IntRange(min=1), default=None, help="Stop after this many maps (partial run)."),
        jobs_option,
    ]
    for option in reversed(options):
        function = option(function)
    return function


@endos.command("count", help="Count endomorphisms per rank.")  # type: ignore
@_endo_options
@click.option(
    "--symmetry/--no-symmetry",
    default=False,
    help="Search one root image and scale by the vertex count.",
)
@click.pass_obj
def endos_count(
    state: CliState,
    params: GraphParams,
    singular: bool,
    ranks: Tuple[int, ...],
    cap: Optional[int],
    symmetry: bool,
) -> int:
    options = _search_options(singular, ranks, cap, state, SearchMode.COUNT)
    if symmetry:
        options = replace(options, use_symmetry=True)
    writer = state.writer(
        "endos count",
        {**params.to_dict(), "singular": singular, "ranks": sorted(ranks), "cap": cap, "symmetry": symmetry},
    )
    search = EndomorphismSearch(params, options, state.config.limits)
    if cap is None:
        tally = search.count(state.config.jobs)
    else:
        for _ in search.stream():
            pass
        tally = search.tally
    writer.write(_tally_record(params, tally))
    return EXIT_OK


@endos.command("enumerate", help="Stream endomorphisms as JSON Lines, one map per line.")  # type: ignore
@_endo_options
@click.pass_obj
def endos_enumerate(
    state: CliState,
    params: GraphParams,
    singular: bool,
    ranks: Tuple[int, ...],
    cap: Optional[int],
) -> int:
    options = _search_options(singular, ranks, cap, state, SearchMode.ENUMERATE)
    writer = state.writer(
        "endos enumerate",
        {**params.to_dict(), "singular": singular, "ranks": sorted(ranks), "cap": cap},
    )
    search = EndomorphismSearch(params, options, state.config.limits)
    for f in search.stream():
        writer.write({"record": "map", "map": list(f.images), **analyze(params, f).to_dict()})
    writer.write(_tally_record(params, search.tally))
    return EXIT_OK


@endos.command("verify", help="Check every singular endomorphism against the structure theorems.")  # type: ignore
@_endo_options
@click.pass_obj
def endos_verify(
    state: CliState,
    params: GraphParams,
    singular: bool,
    ranks: Tuple[int, ...],
    cap: Optional[int],
) -> int:
    writer = state.writer("endos verify", {**params.to_dict(), "ranks": sorted(ranks), "cap": cap})
    options = None
    if ranks or cap is not None:
        options = _search_options(True, ranks, cap, state, SearchMode.PROPERTY_CHECK)
    verification = Verification(state.settings, state.config.limits)
    report = verification.verify(params, options)
    if not verification.verified:
        raise UnsupportedFamilyError(f"no structure theorem covers {params}")
    _write_verification(writer, report)
    return _verification_exit(verification)


def _write_verification(writer: JSONLinesWriter, report: Dict[str, Any]) -> None:
    writer.write_all({"record": "run", **run} for run in report["runs"])
    writer.write_all({"record": "violation", **violation} for violation in report["violations"])
    writer.write_all({"record": "error", **error} for error in report["errors"])
    writer.write_all({"record": "skipped", **skipped} for skipped in report["summary"]["skipped"]["skipped_graphs"])
    summary = {key: value for key, value in report["summary"].items() if key != "skipped"}
    writer.write({"record": "summary", **summary})


@cli.group(help="Count, enumerate and validate Latin hypercubes and hypercuboids.")
def latin() -> None:
    pass


@latin.command("count", help="Count Latin hypercubes of dimension d, order n and class k.")  # type: ignore
@click.option("--d", "d", type=click.IntRange(min=1), required=True)
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--k", "k", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--enumerate", "emit", is_flag=True, default=False, help="Also write every cube.")
@jobs_option
@click.pass_obj
def latin_count(state: CliState, d: int, n: int, k: int, emit: bool) -> int:
    writer = state.writer("latin count", {"d": d, "n": n, "k": k})
    if emit:
        value = 0
        for cube in enumerate_cubes(d, n, k, state.config.limits):
            writer.write({"record": "cube", **cube.to_dict()})
            value += 1
    else:
        value = count_cubes(d, n, k, state.config.limits, state.config.jobs)
    writer.write({"record": "count", "quantity": "lhc", "d": d, "n": n, "k": k, "value": str(value)})
    return EXIT_OK


@latin.command("table", help="#LHC(d, n, k) for d = k..d-max as CSV or JSON Lines.")  # type: ignore
@click.option("--d-max", type=click.IntRange(min=1), required=True)
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--k", "k", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "jsonl"]), default="csv", show_default=True)
@click.pass_obj
def latin_table(state: CliState, d_max: int, n: int, k: int, fmt: str) -> int:
    rows = [
        {"d": d, "n": n, "k": k, "value": count_cubes(d, n, k, state.config.limits, state.config.jobs)}
        for d in range(k, d_max + 1)
    ]
    emit_table(rows, ["d", "n", "k", "value"], state.stream, fmt)
    return EXIT_OK


@latin.command("validate", help="Check a cube file ({dim, order, class, cells}).")  # type: ignore
@click.argument("cube_file", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def latin_validate(state: CliState, cube_file: str) -> int:
    cube = load_cube(cube_file)
    writer = state.writer("latin validate", {"file": cube_file})
    valid, violation = validate_cube(cube)
    writer.write(
        {
            "record": "validation",
            "dim": cube.dim,
            "order": cube.order,
            "class": cube.k,
            "valid": valid,
            "violation": None if violation is None else str(violation),
        }
    )
    return EXIT_OK if valid else EXIT_VIOLATIONS


@latin.command("cuboids", help="Count Latin hypercuboids of the given sides and class.")  # type: ignore
@click.option("--sides", type=INT_LIST, required=True, help="Side lengths such as 3,2")
@click.option("--k", "k", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--enumerate", "emit", is_flag=True, default=False, help="Also write every cuboid.")
@jobs_option
@click.pass_obj
def latin_cuboids(state: CliState, sides: Tuple[int, ...], k: int, emit: bool) -> int:
    writer = state.writer("latin cuboids", {"sides": list(sides), "k": k})
    if emit:
        value = 0
        for cuboid in enumerate_cuboids(sides, k, state.config.limits):
            writer.write(
                {"record": "cuboid", "sides": list(cuboid.sides), "class": cuboid.k, "cells": cuboid.cells.tolist()}
            )
            value += 1
    else:
        value = count_cuboids(sides, k, state.config.limits, state.config.jobs)
    writer.write({"record": "count", "quantity": "cuboids", "sides": list(sides), "k": k, "value": str(value)})
    return EXIT_OK


@cli.group(help="Partition numbers P1 (line tilings) and P2 (categorical clique partitions).")
def jenga() -> None:
    pass


_PARTITION_COUNTERS = {"p1": count_P1, "p2": count_P2}


def _jenga(state: CliState, kind: str, m: int, n: int) -> int:
    writer = state.writer(f"jenga {kind}", {"m": m, "n": n})
    result = _PARTITION_COUNTERS[kind](m, n, state.config.limits, state.config.jobs)
    writer.write({"record": "partition-count", **result.to_dict()})
    return EXIT_OK


@jenga.command("p1", help="Partitions of Z_n^m into 1-layers.")  # type: ignore
@click.option("--m", "m", type=click.IntRange(min=2), required=True)
@click.option("--n", "n", type=click.IntRange(min=2), required=True)
@jobs_option
@click.pass_obj
def jenga_p1(state: CliState, m: int, n: int) -> int:
    return _jenga(state, "p1", m, n)


@jenga.command("p2", help="Partitions of Z_n^m into maximal cliques of H(m, n, m).")  # type: ignore
@click.option("--m", "m", type=click.IntRange(min=2), required=True)
@click.option("--n", "n", type=click.IntRange(min=2), required=True)
@jobs_option
@click.pass_obj
def jenga_p2(state: CliState, m: int, n: int) -> int:
    return _jenga(state, "p2", m, n)


@jenga.command("table", help="One row of the P1 or P2 table as CSV or JSON Lines.")  # type: ignore
@click.option("--kind", type=click.Choice(sorted(_PARTITION_COUNTERS)), required=True)
@click.option("--m", "m", type=click.IntRange(min=2), required=True)
@click.option("--n-min", type=click.IntRange(min=2), default=2, show_default=True)
@click.option("--n-max", type=click.IntRange(min=2), required=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "jsonl"]), default="csv", show_default=True)
@click.pass_obj
def jenga_table(state: CliState, kind: str, m: int, n_min: int, n_max: int, fmt: str) -> int:
    counter = _PARTITION_COUNTERS[kind]
    rows = [
        {"kind": kind.upper(), "m": m, "n": n, "value": counter(m, n, state.config.limits, state.config.jobs).value}
        for n in range(n_min, n_max + 1)
    ]
    emit_table(rows, ["kind", "m", "n", "value"], state.stream, fmt)
    return EXIT_OK


@cli.group(help="Closed-form counts and their crosschecks against exhaustive search.")
def formulas() -> None:
    pass


@formulas.command("thm3", help="Singular endomorphisms of H(m, n) of rank n^k.")  # type: ignore
@click.option("--m", "m", type=click.IntRange(min=2), required=True)
@click.option("--n", "n", type=click.IntRange(min=2), required=True)
@click.option("--k", "k", type=click.IntRange(min=1), default=None, help="Rank exponent; all of 1..m-1 if omitted.")
@click.option(
    "--literature",
    is_flag=True,
    default=False,
    help="Use the documented cube counts from the settings instead of enumerating them.",
)
@click.pass_obj
def formulas_thm3(state: CliState, m: int, n: int, k: Optional[int], literature: bool) -> int:
    writer = state.writer("formulas thm3", {"m": m, "n": n, "k": k, "literature": literature})
    if literature:
        cube_counts = literature_cube_counts(state.settings, n)
    else:
        d_max = m if k is None else m - k + 1
        cube_counts = {d: count_cubes(d, n, 1, state.config.limits, state.config.jobs) for d in range(1, d_max + 1)}
    if k is not None:
        values = {k: theorem3_count(m, n, k, cube_counts)}
    else:
        values = theorem3_histogram(m, n, cube_counts)
    for rank, value in sorted(values.items()):
        writer.write({"record": "formula", "quantity": "thm3", "m": m, "n": n, "rank": str(rank), "value": str(value)})
    if k is None:
        writer.write({"record": "formula", "quantity": "thm3-total", "m": m, "n": n, "value": str(sum(values.values()))})
    return EXIT_OK


@formulas.command("aut", help="|Aut H(m, n)| = (n!)^m m!.")  # type: ignore
@click.option("--m", "m", type=click.IntRange(min=1), required=True)
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.pass_obj
def formulas_aut(state: CliState, m: int, n: int) -> int:
    writer = state.writer("formulas aut", {"m": m, "n": n})
    writer.write({"record": "formula", "quantity": "aut", "m": m, "n": n, "value": str(aut_hamming_count(m, n))})
    return EXIT_OK


@formulas.command("crosscheck", help="Evaluate a formula and compare it with exhaustive search.")  # type: ignore
@click.option("--quantity", type=click.Choice(sorted(CROSSCHECKS)), required=True)
@click.option("--m", "m", type=click.IntRange(min=1), default=None)
@click.option("--n", "n", type=click.IntRange(min=1), default=None)
@click.option("--n1", "n1", type=click.IntRange(min=1), default=None)
@click.option("--n2", "n2", type=click.IntRange(min=1), default=None)
@click.option("--samples", type=click.IntRange(min=0), default=None, help="Seeded constructions to validate.")
@click.pass_obj
def formulas_crosscheck(
    state: CliState,
    quantity: str,
    m: Optional[int],
    n: Optional[int],
    n1: Optional[int],
    n2: Optional[int],
    samples: Optional[int],
) -> int:
    parameters = {
        name: value for name, value in (("m", m), ("n", n), ("n1", n1), ("n2", n2)) if value is not None
    }
    writer = state.writer("formulas crosscheck", {"quantity": quantity, **parameters})
    config = CrosscheckConfig(
        limits=state.config.limits,
        jobs=state.config.jobs,
        sample_size=state.config.sample_size if samples is None else samples,
        seed=state.config.seed,
        max_exhaustive=state.config.max_exhaustive,
    )
    report = crosscheck(quantity, parameters, config)
    writer.write({"record": "crosscheck", **report.to_dict()})
    return EXIT_OK if report.ok else EXIT_VIOLATIONS


@click.option(
    "--suite",
    type=click.Choice(sorted(SUITES)),
    default=None,
    help="Named acceptance suite; structure is used when no graph is given.",
)
@click.option("-g", "--graph", "graphs", type=GRAPH, multiple=True, help="Graphs to verify instead of a suite.")
@click.option(
    "--show-skipped",
    is_flag=True,
    default=False,
    help="List the partial, informational and unsupported runs",
)
@click.option(
    "-r",
    "--reporting-format",
    type=click.Choice(["jsonl", "console", "json", "custom"]),
    default="jsonl",
    help="Format of the output. Options are jsonl, console, json, or custom (to be defined in settings-file). Default is jsonl.",
)
@click.option(
    "-o",
    "--output-file",
    type=click.Path(dir_okay=False),
    default=None,
    help="Optional file name for the json report",
)
@cli.command(help="[Default] Verify the structure theorems on a suite or on the given graphs.")  # type: ignore
@jobs_option
@click.pass_obj
def verify(
    state: CliState,
    suite: Optional[str],
    graphs: Tuple[GraphParams, ...],
    show_skipped: bool,
    reporting_format: str,
    output_file: Optional[str],
) -> int:
    if suite is not None and graphs:
        raise click.UsageError("Use either --suite or --graph, not both")

    if graphs:
        verification = Verification(state.settings, state.config.limits)
        verification.verify(list(graphs))
        result = SuiteResult("graphs", verification=verification)
    else:
        result = run_suite(suite or "structure", state.config, state.settings)

    if reporting_format == "jsonl":
        writer = state.writer(
            "verify",
            {"suite": result.name, "graphs": [params.to_text() for params in graphs]},
        )
        writer.write_all(entry.to_dict() for entry in result.entries)
        if result.verification is not None:
            _write_verification(writer, result.verification._generate_results())
        writer.write(
            {
                "record": "suite",
                "suite": result.name,
                "entries": len(result.entries),
                "failures": len(result.failures),
                "violations": result.violation_count,
                "limit_hit": result.limit_hit,
                "passed": result.passed,
            }
        )
    else:
        if result.entries:
            print_suite(result)
        if result.verification is not None:
            _report(result.verification, reporting_format, show_skipped, output_file)

    return _suite_exit(result)


def _report(
    verification: Verification,
    reporting_format: str,
    show_skipped: bool,
    output_file: Optional[str],
) -> None:
    reporting = dict(verification._settings["reporting"])
    if reporting_format != "custom":
        reporting["module"] = DEFAULT_REPORTING_MODULES[reporting_format]
    reporting["settings"] = {
        **reporting.get("settings", {}),
        "show_skipped": show_skipped,
        "output_file": output_file,
    }
    verification._settings = {**verification._settings, "reporting": reporting}
    verification.generate_report()


@cli.command("create-settings-file", help="Create a hamendo settings file")  # type: ignore
@click.option("-f", "--force", is_flag=True, help="Overwrite existing settings file if it exists.")
@click.option(
    "-l",
    "--location",
    type=click.Path(dir_okay=False, writable=True),
    help="The specific filepath to write the settings file.",
)
def create_settings(force: bool, location: Optional[str]) -> int:
    settings_path = location or os.path.join(os.getcwd(), DEFAULT_SETTINGS_FILE)

    if os.path.exists(settings_path) and not force:
        logger.warning(
            "%s file already exists. Please use `--force` flag if you intend to overwrite it.",
            settings_path,
        )
        return EXIT_OK

    with open(settings_path, mode="w", encoding="utf-8") as settings_file:
        settings_file.write(SettingsUtils.get_default_settings_as_toml())
    return EXIT_OK


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command line and return its exit code."""
    try:
        result = cli.main(args=list(argv) if argv is not None else None, prog_name="hamendo", standalone_mode=False)

    except click.ClickException as e:
        click.echo(f"Error: {e.format_message()}", err=True)
        return EXIT_USAGE

    except click.exceptions.Abort:
        return EXIT_USAGE

    except LimitExceededError as e:
        logger.error("Limit exceeded: %s", e)
        return EXIT_LIMITS

    except (InvalidParamsError, UnsupportedFamilyError, NotAnEndomorphismError) as e:
        click.echo(f"Error: {e}", err=True)
        return EXIT_USAGE

    except StructureError as e:
        logger.error("Structure check failed: %s", e)
        return EXIT_VIOLATIONS

    except HamendoException as e:
        click.echo(f"Exception: {e}", err=True)
        return EXIT_USAGE

    except OSError as e:
        click.echo(f"Error: {e}", err=True)
        return EXIT_USAGE

    finally:
        _release_logging()

    return int(result or EXIT_OK)


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
