"""Report documents and their CSV / JSON serialisation."""
import csv
import io
import json
import math
from dataclasses import dataclass, field

SCHEMA_VERSION = "1.0"


class NonFiniteError(ValueError):
    """A report contains NaN or an infinity."""


@dataclass
class ReportDocument:
    command: dict
    fields: list
    rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION


def _check_finite(value, where):
    if isinstance(value, float) and not math.isfinite(value):
        raise NonFiniteError(f"non-finite value in {where}")
    if isinstance(value, dict):
        for k, v in value.items():
            _check_finite(v, f"{where}.{k}")
    elif isinstance(value, (list, tuple)):
        for i, v in enumerate(value):
            _check_finite(v, f"{where}[{i}]")


def format_cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if not math.isfinite(value):
            raise NonFiniteError("non-finite value in row")
        return format(value, ".17g")
    return str(value)


def csv_header(fields):
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\r\n").writerow(fields)
    return buf.getvalue()


def csv_row(fields, row):
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\r\n").writerow(
        [format_cell(row[f]) for f in fields])
    return buf.getvalue()


def emit(report, fmt):
    """Serialise ``report`` as ``"csv"`` or ``"json"`` bytes.

    CSV carries only the header and rows, with floats at 17 significant
    digits.  JSON holds the whole document.

    Raises:
        NonFiniteError: if any value is NaN or infinite.
    """
    if fmt == "csv":
        parts = [csv_header(report.fields)]
        parts += [csv_row(report.fields, r) for r in report.rows]
        return "".join(parts).encode()
    if fmt == "json":
        doc = {
            "schema_version": report.schema_version,
            "command": report.command,
            "rows": [{f: r[f] for f in report.fields} for r in report.rows],
            "summary": report.summary,
        }
        _check_finite(doc, "report")
        return (json.dumps(doc, indent=2, allow_nan=False) + "\n").encode()
    raise ValueError(f"unknown format {fmt!r}")


def _parse_cell(text):
    if text in ("true", "false"):
        return text == "true"
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def parse(data, fmt):
    """Inverse of :func:`emit` (CSV yields rows only)."""
    text = data.decode() if isinstance(data, bytes) else data
    if fmt == "json":
        doc = json.loads(text)
        return ReportDocument(doc["command"],
                              list(doc["rows"][0]) if doc["rows"] else [],
                              doc["rows"], doc["summary"],
                              doc["schema_version"])
    reader = csv.reader(io.StringIO(text, newline=""))
    fields = next(reader)
    rows = [dict(zip(fields, map(_parse_cell, rec))) for rec in reader]
    return ReportDocument({}, fields, rows)
