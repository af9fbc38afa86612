import abc
import csv
import json
import logging
from typing import IO, Any, Dict, Iterable, List, Optional, Sequence

from rich import print

from hamendo._version import __version__
from hamendo.error import InvalidParamsError
from hamendo.suites import SuiteResult
from hamendo.verification import Verification

logger = logging.getLogger("hamendo")

_VOLATILE_KEYS = ("seconds", "timestamp")


class Report(metaclass=abc.ABCMeta):
    """
    Abstract base class for different reporting modules.
    """

    def __init__(self) -> None:
        pass

    @staticmethod
    def generate(
        verification: Verification,
        settings: Dict[str, Any] = {},
    ) -> Optional[str]:
        """
        Generate report for the given verification run.
        Derived classes must provide implementation of this method.

        :param verification: Instance of Verification after ``verify`` ran.

        :param settings: Reporting settings from the settings file.
        """
        raise NotImplementedError


class ConsoleReport(Report):
    @staticmethod
    def generate(
        verification: Verification,
        settings: Dict[str, Any] = {},
    ) -> None:
        violations_by_code = verification.violations.group_by_code()
        print("\n[blue]--- Summary ---")
        for run in verification.runs:
            ranks = ", ".join(f"{rank}: {count}" for rank, count in run["observed_ranks"].items())
            partial = " [yellow](partial)" if run["partial"] else ""
            print(f"\n{run['graph']} / {run['verifier']}: {run['maps_checked']} maps, ranks {{{ranks}}}{partial}")

        total_violation_count = len(verification.violations)
        if total_violation_count > 0:
            print(f"\nTotal Violations: {total_violation_count}")
            print("\n[blue]--- Violations by Code ---")
            for code, found in violations_by_code.items():
                print(f"\n[blue]--- {code} ({len(found)}) ---")
                for violation in found:
                    violation.print()
        else:
            print("\n[green] No violations found!")

        if len(verification.errors) > 0:
            print("\n[red]--- Errors --- ")
            for index, error in enumerate(verification.errors):
                print(f"\nError {index+1}:")
                print(str(error))

        if len(verification.skipped) > 0:
            print("\n[blue]--- Skipped --- ")
            print(f"\nTotal skipped: {len(verification.skipped)} - run with --show-skipped to see the full list.")
            if settings.get("show_skipped"):
                print("\nSkipped list:\n")
                for skipped in verification.skipped:
                    print(str(skipped))


class JSONReport(Report):
    @staticmethod
    def generate(
        verification: Verification,
        settings: Dict[str, Any] = {},
    ) -> None:
        report: Dict[str, Any] = verification._generate_results()
        if not settings.get("show_skipped"):
            del report["summary"]["skipped"]

        print(json.dumps(report))

        output = settings.get("output_file")
        if output:
            with open(output, "w") as outfile:
                json.dump(report, outfile)


def _strip(record: Any) -> Any:
    if isinstance(record, dict):
        return {key: _strip(value) for key, value in record.items() if key not in _VOLATILE_KEYS}
    if isinstance(record, list):
        return [_strip(value) for value in record]
    return record


class JSONLinesWriter:
    """
    One JSON object per line: a header record describing the run, then one
    record per result. In canonical mode timings are dropped so identical
    runs write identical bytes.
    """

    def __init__(self, stream: IO[str], canonical: bool = True) -> None:
        self._stream = stream
        self._canonical = canonical

    def header(self, command: str, params: Dict[str, Any], config: Dict[str, Any]) -> None:
        self.write(
            {
                "record": "header",
                "version": __version__,
                "command": command,
                "params": params,
                "seed": config.get("seed"),
                "limits": config.get("limits"),
                "jobs": config.get("jobs"),
                "canonical": config.get("canonical"),
            }
        )

    def write(self, record: Dict[str, Any]) -> None:
        if self._canonical:
            record = _strip(record)
        self._stream.write(json.dumps(record, sort_keys=self._canonical) + "\n")

    def write_all(self, records: Iterable[Dict[str, Any]]) -> int:
        written = 0
        for record in records:
            self.write(record)
            written += 1
        return written


def _cell(value: Any) -> Any:
    # big integers travel as decimal strings
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return str(value)
    return value


def emit_table(
    rows: Sequence[Dict[str, Any]],
    columns: List[str],
    stream: IO[str],
    fmt: str = "csv",
) -> None:
    """Write ``rows`` with the given column order; an empty table is a header-only file."""
    if fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(["" if row.get(column) is None else _cell(row.get(column)) for column in columns])
    elif fmt == "jsonl":
        stream.write(json.dumps({"record": "header", "columns": columns}) + "\n")
        for row in rows:
            stream.write(json.dumps({column: _cell(row.get(column)) for column in columns}) + "\n")
    else:
        raise InvalidParamsError(f"unknown table format {fmt}")
    logger.debug("Emitted %d rows as %s", len(rows), fmt)


def print_suite(result: SuiteResult) -> None:
    """Console rendering of a suite's table entries."""
    print(f"\n[blue]--- Suite {result.name} ---")
    for entry in result.entries:
        parameters = ", ".join(f"{key}={value}" for key, value in entry.parameters.items())
        status = "[green]ok" if entry.passed else "[red]FAIL"
        print(f"{status}[/] {entry.quantity}({parameters}) = {entry.observed} (expected {entry.expected}, {entry.provenance})")
        for note in entry.notes:
            print(f"    {note}")
    if result.failures:
        print(f"\n[red]{len(result.failures)} of {len(result.entries)} entries failed")
    elif result.entries:
        print(f"\n[green]All {len(result.entries)} entries match")
