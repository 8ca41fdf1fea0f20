"""Run one conditional-independence test on a delimited dataset.

Exits 0 whatever the statistical outcome; 3 on data errors, 4 on spec errors.
"""
from citest.base import TestOptions, ci_test
from citest.serializers import TestResultSerializer, render_json, render_tsv
from core.commands import EngineCommand, engine_errors, parse_list, parse_method
from core.models import TestSpec


class Command(EngineCommand):
    help = "Test whether X is independent of Y given a conditioning set"

    def add_arguments(self, parser):
        self.add_data_arguments(parser)
        parser.add_argument("--x", required=True, help="Column name or 0-based index")
        parser.add_argument("--y", required=True, help="Column name or 0-based index")
        parser.add_argument(
            "--cs", default="", help="Comma-separated conditioning columns"
        )
        parser.add_argument("--method", default="closed", help="closed or ipf")
        parser.add_argument(
            "--adjust-dof",
            action="store_true",
            help="Count only strata with observations in the dof",
        )
        parser.add_argument("--format", choices=("json", "tsv"), default="json")

    def handle(self, *args, **options):
        method = parse_method(options["method"])
        data = self.read_data(options)
        spec = TestSpec(
            x=self.resolve(data, options["x"]),
            y=self.resolve(data, options["y"]),
            cs=tuple(self.resolve(data, ref) for ref in parse_list(options["cs"])),
        )
        test_options = TestOptions.from_settings(
            method=method, adjust_dof=options["adjust_dof"]
        )
        with engine_errors():
            result = ci_test(data, spec, test_options)
        row = TestResultSerializer(result, context={"names": data.names}).data
        if options["format"] == "tsv":
            self.stdout.write(render_tsv([row]), ending="")
        else:
            self.stdout.write(render_json(row))
