"""Bench reports: TSV (plot-ready) and markdown tables of normalized times.

TSV columns: scenario, n, T, method, mean_seconds, normalized; every number
is written with 3 decimals.
"""
import csv
import io
from itertools import groupby
from typing import Sequence

from .harness import BenchRecord
from .serializers import BenchRecordSerializer

TSV_FIELDS = ("scenario", "n", "T", "method", "mean_seconds", "normalized")
FORMATS = ("tsv", "markdown")


def _sort_key(record: BenchRecord):
    return (record.scenario, record.n, record.tests, record.method)


def _tsv(records: Sequence[BenchRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, delimiter="\t", lineterminator="\n")
    writer.writerow(TSV_FIELDS)
    for record in records:
        writer.writerow(
            [
                record.scenario,
                record.n,
                record.tests,
                record.method,
                f"{record.mean_seconds:.3f}",
                f"{record.normalized:.3f}",
            ]
        )
    return buffer.getvalue()


def _markdown(records: Sequence[BenchRecord]) -> str:
    """One table per scenario: rows are test counts, columns are (n, method)"""
    sections = []
    for scenario, group in groupby(records, key=lambda record: record.scenario):
        group = list(group)
        columns = sorted({(record.n, record.method) for record in group})
        cells = {(record.tests, record.n, record.method): record for record in group}
        lines = [
            f"### {scenario}: normalized times",
            "",
            "| Number of tests | "
            + " | ".join(f"n={n} {method}" for n, method in columns)
            + " |",
            "|---|" + "---|" * len(columns),
        ]
        for tests in sorted({record.tests for record in group}):
            values = []
            for n, method in columns:
                record = cells.get((tests, n, method))
                values.append(f"{record.normalized:.3f}" if record else "")
            lines.append(f"| {tests} | " + " | ".join(values) + " |")
        sections.append("\n".join(lines))
    return "\n\n".join(sections) + "\n"


def emit_report(records: Sequence[BenchRecord], fmt: str = "tsv") -> str:
    if not records:
        raise ValueError("no bench records to report")
    if fmt not in FORMATS:
        raise ValueError(f"unknown report format {fmt}; choose from {FORMATS}")
    records = sorted(records, key=_sort_key)
    if fmt == "markdown":
        return _markdown(records)
    return _tsv(records)


def parse_report(text: str) -> list[BenchRecord]:
    """Read a TSV report back into records"""
    records = []
    reader = csv.DictReader(io.StringIO(text), delimiter="\t")
    for line, row in enumerate(reader, start=2):
        serializer = BenchRecordSerializer(data=row)
        if not serializer.is_valid():
            raise ValueError(f"line {line}: {serializer.errors}")
        records.append(serializer.save())
    return records
