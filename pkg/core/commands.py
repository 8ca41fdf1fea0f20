"""Shared plumbing for the engine's management commands.

Exit codes: 2 for bad flag values, 3 for data errors, 4 for spec errors.
"""
from contextlib import contextmanager
import logging

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from datasets.readers import read_delimited

from .exceptions import DataError, SpecError
from .models import Method

LOG = logging.getLogger(__name__)

USAGE_ERROR = 2
DATA_ERROR = 3
SPEC_ERROR = 4

METHOD_ALIASES = {
    "closed": Method.CLOSED_FORM,
    "closed_form": Method.CLOSED_FORM,
    "ipf": Method.IPF,
}


def parse_list(value, cast=str, flag="value"):
    """Split a comma-separated flag value, dropping blanks"""
    if value is None:
        return []
    items = [item.strip() for item in str(value).split(",") if item.strip()]
    try:
        return [cast(item) for item in items]
    except ValueError as exc:
        raise CommandError(
            f"bad {flag} {value!r}: {exc}", returncode=USAGE_ERROR
        ) from exc


def parse_method(value) -> Method:
    try:
        return METHOD_ALIASES[str(value).strip().lower()]
    except KeyError:
        raise CommandError(
            f"unknown method {value!r}; choose from {', '.join(METHOD_ALIASES)}",
            returncode=USAGE_ERROR,
        ) from None


@contextmanager
def engine_errors():
    """Turn engine exceptions into CommandErrors with the matching exit code"""
    try:
        yield
    except SpecError as exc:
        raise CommandError(str(exc), returncode=SPEC_ERROR) from exc
    except DataError as exc:
        raise CommandError(str(exc), returncode=DATA_ERROR) from exc


class EngineCommand(BaseCommand):
    """Base for commands that read a delimited dataset"""

    def add_data_arguments(self, parser):
        parser.add_argument("--data", required=True, help="Delimited input file")
        parser.add_argument(
            "--delimiter",
            default=None,
            help="Field delimiter (default from DEFAULT_DELIMITER)",
        )
        parser.add_argument(
            "--no-header",
            action="store_true",
            help="First line is an observation; columns are named V1..Vp",
        )

    def read_data(self, options):
        with engine_errors():
            return read_delimited(
                options["data"],
                delimiter=self.delimiter(options),
                has_header=not options["no_header"],
            )

    def delimiter(self, options):
        delimiter = options.get("delimiter") or settings.DEFAULT_DELIMITER
        if delimiter == "\\t":
            delimiter = "\t"
        if len(delimiter) != 1:
            raise CommandError(
                f"delimiter must be one character, got {delimiter!r}",
                returncode=USAGE_ERROR,
            )
        return delimiter

    def resolve(self, data, ref):
        try:
            return data.column_index(ref)
        except KeyError:
            raise CommandError(
                f"unknown column {ref!r}; columns are {', '.join(data.names)}",
                returncode=SPEC_ERROR,
            ) from None

    def write_output(self, text, path=None):
        if not path:
            self.stdout.write(text, ending="")
            return
        try:
            with open(path, "w", encoding="utf-8", newline="") as out:
                out.write(text)
        except OSError as exc:
            raise CommandError(
                f"unable to write {path}: {exc}", returncode=DATA_ERROR
            ) from exc
        LOG.info("Wrote %s", path)
