"""CSV output for metric series and result tables.

Floats are written with ``repr`` so a parse gives back the identical value,
absent values are empty fields, and files are UTF-8 with LF line endings.
"""

import csv
import math
from pathlib import Path

from .metrics import CSV_COLUMNS, MetricsRecord

INT_COLUMNS = ("step", "vehicles")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def _open_for_write(path: Path):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        return path.open("w", encoding="utf-8", newline="")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def emit_csv(records, path) -> Path:
    """Write one row per MetricsRecord under the fixed column header."""
    path = Path(path)
    with _open_for_write(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
    return path


def _parse(column: str, text: str):
    if text == "":
        return None
    if column in INT_COLUMNS:
        return int(text)
    return float(text)


def read_csv(path) -> list[MetricsRecord]:
    path = Path(path)
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != CSV_COLUMNS:
            raise ValueError(f"{path}: not a metrics file (header {header})")
        return [MetricsRecord(**{c: _parse(c, v) for c, v in zip(CSV_COLUMNS, row)}) for row in reader]


def is_metrics_csv(path) -> bool:
    try:
        with Path(path).open(encoding="utf-8", newline="") as fh:
            return tuple(next(csv.reader(fh), ())) == CSV_COLUMNS
    except (OSError, UnicodeDecodeError):
        return False


def emit_table(rows: list[dict], path, columns=None) -> Path:
    """Write a list of flat dicts as CSV; columns default to first-seen key order."""
    path = Path(path)
    if columns is None:
        columns = []
        for row in rows:
            columns.extend(k for k in row if k not in columns)
    with _open_for_write(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(row.get(c)) for c in columns])
    return path


def read_table(path) -> list[dict]:
    """Read a table written by ``emit_table``; numeric-looking fields become floats."""
    def conv(v):
        if v == "":
            return None
        try:
            return float(v)
        except ValueError:
            return v
    with Path(path).open(encoding="utf-8", newline="") as fh:
        return [{k: conv(v) for k, v in row.items()} for row in csv.DictReader(fh)]
