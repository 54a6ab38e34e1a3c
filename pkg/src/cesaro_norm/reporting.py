"""CSV / JSON / text emission of report records, and the matching CSV reader.

Floats are written with 17 significant digits so every value survives a
write/read round trip bit for bit.  ``None`` becomes an empty CSV cell.
"""

from __future__ import annotations

import csv
import io
import json
import math

FORMATS = ("csv", "json", "text")


def format_value(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.17g}"
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return format_value(v)
    return v


def render(records, fields, fmt="csv", summary=None):
    """Render a list of dicts; ``summary`` is only emitted in the JSON form."""
    records = [{k: rec.get(k) for k in fields} for rec in records]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(fields)
        for rec in records:
            w.writerow([format_value(rec[k]) for k in fields])
        return buf.getvalue()
    if fmt == "json":
        rows = [{k: _json_value(v) for k, v in rec.items()} for rec in records]
        if len(rows) == 1 and summary is None:
            obj = rows[0]
        else:
            obj = {"records": rows}
            if summary is not None:
                obj["summary"] = summary
        return json.dumps(obj, indent=2) + "\n"
    if fmt == "text":
        width = max(len(k) for k in fields)
        blocks = ["\n".join(f"{k:<{width}}  {format_value(rec[k])}" for k in fields) for rec in records]
        return "\n\n".join(blocks) + "\n"
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def parse_value(text):
    """Inverse of :func:`format_value` for CSV cells."""
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_csv(source):
    """Parse CSV text (or an open file) written by :func:`render`."""
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.DictReader(source)
    return [{k: parse_value(v) for k, v in row.items()} for row in reader]
