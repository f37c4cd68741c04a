"""CSV/JSON writers and the CSV reader for result records

Floats are written with repr(), the shortest string that round-trips, and
None as an empty cell.
"""
import csv
import io
import json
import logging
import sys
from contextlib import contextmanager
from typing import Iterable, Iterator, List, Optional, Sequence, TextIO, Type, TypeVar

from pydantic import BaseModel

from ..models import OutputFormat

logger = logging.getLogger(__name__)

RecordT = TypeVar("RecordT", bound=BaseModel)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_csv(records: Sequence[BaseModel], stream: TextIO, model: Type[BaseModel]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    fields = list(model.model_fields)
    writer.writerow(fields)
    for record in records:
        writer.writerow([_cell(getattr(record, name)) for name in fields])


def emit_json(records: Sequence[BaseModel], stream: TextIO) -> None:
    json.dump([r.model_dump(mode="json") for r in records], stream, indent=2)
    stream.write("\n")


def parse_csv(text: str, model: Type[RecordT]) -> List[RecordT]:
    """Inverse of emit_csv"""
    reader = csv.DictReader(io.StringIO(text))
    expected = list(model.model_fields)
    if reader.fieldnames != expected:
        raise ValueError(f"CSV header {reader.fieldnames} does not match {expected}")
    return [
        model.model_validate({key: (value if value != "" else None) for key, value in row.items()})
        for row in reader
    ]


@contextmanager
def open_output(path: Optional[str]) -> Iterator[TextIO]:
    if path in (None, "", "-"):
        yield sys.stdout
        return
    with open(path, "w", newline="") as handle:
        yield handle
    logger.info(f"Results written to {path}")


def write_records(
    records: Iterable[BaseModel],
    model: Type[BaseModel],
    path: Optional[str],
    fmt: OutputFormat,
) -> None:
    records = list(records)
    with open_output(path) as stream:
        if fmt == OutputFormat.JSON:
            emit_json(records, stream)
        else:
            emit_csv(records, stream, model)
