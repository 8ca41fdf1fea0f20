"""Delimited text in and out.

One observation per line, categorical tokens separated by the delimiter.
Quoting is not supported: tokens may not contain the delimiter.
"""
import csv
import io
import logging
import os
from typing import IO, Union

from core.exceptions import DataError
from core.models import CategoricalColumn, Dataset

LOG = logging.getLogger(__name__)

PathOrStream = Union[str, os.PathLike, IO[str]]


def _open(source: PathOrStream, mode: str):
    if hasattr(source, "read") or hasattr(source, "write"):
        return source, False
    try:
        return open(source, mode, encoding="utf-8", newline=""), True
    except OSError as exc:
        raise DataError(f"unable to open {source}: {exc}") from exc


def read_delimited(
    source: PathOrStream, delimiter: str = ",", has_header: bool = True
) -> Dataset:
    stream, should_close = _open(source, "r")
    try:
        rows = list(
            csv.reader(stream, delimiter=delimiter, quoting=csv.QUOTE_NONE, strict=True)
        )
    except csv.Error as exc:
        raise DataError(f"unreadable input: {exc}") from exc
    finally:
        if should_close:
            stream.close()

    # trailing blank lines are not observations
    while rows and not any(rows[-1]):
        rows.pop()
    if not rows:
        raise DataError("input is empty")
    first_line = 1
    if has_header:
        names = [name.strip() for name in rows[0]]
        rows = rows[1:]
        first_line = 2
        if any(not name for name in names):
            raise DataError("blank column name in header", line=1)
        if len(set(names)) != len(names):
            raise DataError(f"duplicate column names in header: {names}", line=1)
    else:
        names = [f"V{i + 1}" for i in range(len(rows[0]))]
    if not rows:
        raise DataError("input has a header but no observations")

    width = len(names)
    for offset, row in enumerate(rows):
        line = first_line + offset
        if len(row) != width:
            raise DataError(f"expected {width} fields, found {len(row)}", line=line)
        for name, token in zip(names, row):
            if not token.strip():
                raise DataError(f"missing value for column {name}", line=line)

    columns = tuple(
        CategoricalColumn.factorize(name, [row[i].strip() for row in rows])
        for i, name in enumerate(names)
    )
    data = Dataset(columns=columns)
    LOG.info(
        "Read %s rows x %s columns (levels %s)",
        data.n_rows,
        len(columns),
        data.levels,
    )
    return data


def write_delimited(data: Dataset, target: PathOrStream, delimiter: str = ",") -> None:
    """Write a header of column names and one row per observation"""
    for col in data.columns:
        tokens = col.labels or ()
        if delimiter in col.name or any(delimiter in token for token in tokens):
            raise DataError(f"column {col.name} contains the delimiter {delimiter!r}")
    stream, should_close = _open(target, "w")
    try:
        writer = csv.writer(
            stream,
            delimiter=delimiter,
            quoting=csv.QUOTE_NONE,
            lineterminator="\n",
        )
        writer.writerow(data.names)
        writer.writerows(zip(*(col.decode() for col in data.columns)))
    except (OSError, csv.Error) as exc:
        raise DataError(f"unable to write dataset: {exc}") from exc
    finally:
        if should_close:
            stream.close()


def dumps(data: Dataset, delimiter: str = ",") -> str:
    buffer = io.StringIO()
    write_delimited(data, buffer, delimiter=delimiter)
    return buffer.getvalue()
