"""Write a synthetic categorical dataset laid out as X, Y, Z1..Zk"""
from django.core.management.base import CommandError

from core.commands import USAGE_ERROR, EngineCommand, engine_errors, parse_list
from datasets.generators import Dependence, GenConfig, generate
from datasets.readers import dumps, write_delimited

MODES = {"null": Dependence.NULL_CI, "dependent": Dependence.DEPENDENT}


class Command(EngineCommand):
    help = "Generate a dataset where X and Y are independent given Z (or not)"

    def add_arguments(self, parser):
        parser.add_argument("--n", type=int, required=True, help="Number of rows")
        parser.add_argument(
            "--levels",
            required=True,
            help="Comma-separated level counts for X, Y, Z1..Zk",
        )
        parser.add_argument("--mode", choices=tuple(MODES), default="null")
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--out", default=None, help="Output path (default stdout)")
        parser.add_argument("--delimiter", default=None)

    def handle(self, *args, **options):
        levels = parse_list(options["levels"], cast=int, flag="levels")
        if not levels:
            raise CommandError("--levels must not be empty", returncode=USAGE_ERROR)
        delimiter = self.delimiter(options)
        with engine_errors():
            data = generate(
                GenConfig(
                    n=options["n"],
                    levels=levels,
                    dependence=MODES[options["mode"]],
                    seed=options["seed"],
                )
            )
            if options["out"]:
                write_delimited(data, options["out"], delimiter=delimiter)
            else:
                self.stdout.write(dumps(data, delimiter=delimiter), ending="")
        if options["out"]:
            self.stderr.write(
                f"Wrote {data.n_rows} rows to {options['out']}",
                style_func=self.style.SUCCESS,
            )
