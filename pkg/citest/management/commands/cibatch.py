"""Screen many conditional-independence tests against one dataset.

``--pairs all`` tests every pair of columns outside the conditioning set.
Otherwise ``--pairs`` names a file with one pair per line, the two columns
separated by a comma, tab or space; blank lines and ``#`` comments are
skipped. Output is in input order whatever ``--workers`` is.
"""
import re

from django.conf import settings
from django.core.management.base import CommandError

from citest.base import TestOptions, association_matrix, batch_screen, pairwise_specs
from citest.serializers import TestResultSerializer, render_json, render_tsv
from core.commands import (
    DATA_ERROR,
    USAGE_ERROR,
    EngineCommand,
    engine_errors,
    parse_list,
    parse_method,
)
from core.models import TestSpec

PAIR_SEPARATOR = re.compile(r"[,\t ]+")


class Command(EngineCommand):
    help = "Run a batch of conditional-independence tests"

    def add_arguments(self, parser):
        self.add_data_arguments(parser)
        parser.add_argument("--pairs", default="all", help="'all' or a pairs file")
        parser.add_argument(
            "--cs", default="", help="Comma-separated conditioning columns"
        )
        parser.add_argument(
            "--workers",
            type=int,
            default=None,
            help="Worker processes (default from BATCH_WORKERS)",
        )
        parser.add_argument("--method", default="closed", help="closed or ipf")
        parser.add_argument("--adjust-dof", action="store_true")
        parser.add_argument(
            "--format", choices=("jsonl", "tsv", "matrix"), default="jsonl"
        )

    def read_pairs(self, path):
        try:
            with open(path, encoding="utf-8") as pairs_file:
                lines = pairs_file.read().splitlines()
        except OSError as exc:
            raise CommandError(
                f"unable to read pairs file {path}: {exc}", returncode=DATA_ERROR
            ) from exc
        pairs = []
        for number, line in enumerate(lines, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            fields = PAIR_SEPARATOR.split(line)
            if len(fields) != 2:
                raise CommandError(
                    f"{path} line {number}: expected two columns, found {len(fields)}",
                    returncode=DATA_ERROR,
                )
            pairs.append(fields)
        return pairs

    def handle(self, *args, **options):
        method = parse_method(options["method"])
        workers = options["workers"]
        if workers is None:
            workers = settings.BATCH_WORKERS
        if workers < 1:
            raise CommandError(
                f"workers must be positive, got {workers}", returncode=USAGE_ERROR
            )
        data = self.read_data(options)
        cs = tuple(self.resolve(data, ref) for ref in parse_list(options["cs"]))
        if options["pairs"] == "all":
            specs = pairwise_specs(data, cs)
        else:
            specs = [
                TestSpec(x=self.resolve(data, x), y=self.resolve(data, y), cs=cs)
                for x, y in self.read_pairs(options["pairs"])
            ]
        test_options = TestOptions.from_settings(
            method=method, adjust_dof=options["adjust_dof"]
        )
        with engine_errors():
            results = batch_screen(data, specs, workers=workers, options=test_options)

        if options["format"] == "matrix":
            matrix = association_matrix(data, results)
            lines = ["\t".join(["", *data.names])]
            for name, row in zip(data.names, matrix):
                lines.append("\t".join([name, *(f"{value:.10g}" for value in row)]))
            self.stdout.write("\n".join(lines) + "\n", ending="")
            return
        rows = TestResultSerializer(
            results, many=True, context={"names": data.names}
        ).data
        if options["format"] == "tsv":
            self.stdout.write(render_tsv(rows), ending="")
        else:
            for row in rows:
                self.stdout.write(render_json(row))
