"""Background screening for deployments running a Celery worker"""
import logging

from celery import shared_task

from core.exceptions import SpecError
from core.models import Method, TestSpec
from datasets.readers import read_delimited

from .base import TestOptions, batch_screen, pairwise_specs
from .serializers import TestResultSerializer

LOG = logging.getLogger(__name__)


@shared_task
def screen_file(
    path,
    pairs=None,
    cs=(),
    workers=1,
    method=Method.CLOSED_FORM.value,
    delimiter=",",
):
    """Screen a delimited file; ``pairs`` is a list of [x, y] column names or indices.

    All pairs of columns outside ``cs`` are tested when ``pairs`` is empty.
    Returns the serialized results in input order.
    """
    data = read_delimited(path, delimiter=delimiter)
    try:
        cs = tuple(data.column_index(ref) for ref in cs)
        if pairs:
            specs = [
                TestSpec(x=data.column_index(x), y=data.column_index(y), cs=cs)
                for x, y in pairs
            ]
        else:
            specs = pairwise_specs(data, cs)
    except KeyError as exc:
        raise SpecError(f"unknown column {exc.args[0]}") from exc
    LOG.debug("Screening %s pairs from %s", len(specs), path)
    results = batch_screen(
        data, specs, workers=workers, options=TestOptions.from_settings(method=method)
    )
    return TestResultSerializer(
        results, many=True, context={"names": data.names}
    ).data
