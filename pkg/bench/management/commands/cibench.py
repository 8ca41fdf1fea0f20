"""Time closed-form and IPF tests over a grid of test counts and sample sizes.

Scenarios are given as ``name=3,4,2`` (or just ``3,4,2``); the level list is
laid out |X|, |Y|, |Z1|, ..., |Zk|. Without ``--scenario`` the three default
conditioning sets are timed.
"""
from django.conf import settings
from django.core.management.base import CommandError

from bench.harness import DEFAULT_SCENARIOS, BenchConfig, Scenario, run_bench
from bench.reports import FORMATS, emit_report
from citest.base import TestOptions
from core.commands import (
    USAGE_ERROR,
    EngineCommand,
    engine_errors,
    parse_list,
    parse_method,
)


class Command(EngineCommand):
    help = "Benchmark conditional-independence tests and report normalized times"

    def add_arguments(self, parser):
        parser.add_argument("--test-counts", default=None, help="e.g. 500,1000")
        parser.add_argument("--sample-sizes", default=None, help="e.g. 3000,5000")
        parser.add_argument(
            "--scenario",
            action="append",
            default=[],
            help="name=levels; may be repeated",
        )
        parser.add_argument(
            "--repetitions",
            type=int,
            default=None,
            help="Datasets per cell (default from BENCH_REPETITIONS)",
        )
        parser.add_argument("--methods", default="closed,ipf")
        parser.add_argument(
            "--workers",
            type=int,
            default=None,
            help="Also time batch screening on this many workers",
        )
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--format", choices=FORMATS, default="tsv")
        parser.add_argument("--out", default=None, help="Output path (default stdout)")

    def parse_scenario(self, position, value):
        name, _, levels = value.rpartition("=")
        return Scenario(
            name=name or f"s{position}",
            levels=parse_list(levels, cast=int, flag="scenario levels"),
        )

    def handle(self, *args, **options):
        overrides = {}
        if options["test_counts"]:
            overrides["test_counts"] = parse_list(
                options["test_counts"], cast=int, flag="test counts"
            )
        if options["sample_sizes"]:
            overrides["sample_sizes"] = parse_list(
                options["sample_sizes"], cast=int, flag="sample sizes"
            )
        try:
            scenarios = tuple(
                self.parse_scenario(position, value)
                for position, value in enumerate(options["scenario"], start=1)
            )
            config = BenchConfig(
                scenarios=scenarios or DEFAULT_SCENARIOS,
                repetitions=(
                    settings.BENCH_REPETITIONS
                    if options["repetitions"] is None
                    else options["repetitions"]
                ),
                methods=[parse_method(i) for i in parse_list(options["methods"])],
                batch_workers=options["workers"],
                seed=options["seed"],
                **overrides,
            )
        except ValueError as exc:
            raise CommandError(str(exc), returncode=USAGE_ERROR) from exc

        with engine_errors():
            records = run_bench(config, TestOptions.from_settings())
        self.write_output(emit_report(records, options["format"]), options["out"])
