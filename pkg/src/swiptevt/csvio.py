"""Deterministic CSV output with typed, exactly round-tripping records."""

from __future__ import annotations

import csv
import math

import numpy as np

__all__ = ["write_records", "read_records", "format_value"]


def _kind(value):
    if isinstance(value, (bool, np.bool_)):
        return "bool"
    if isinstance(value, (int, np.integer)):
        return "int"
    if isinstance(value, (float, np.floating)):
        return "float"
    if isinstance(value, str):
        return "str"
    raise TypeError(f"unsupported CSV value {value!r}")


def format_value(value) -> str:
    kind = _kind(value)
    if kind == "bool":
        return "true" if value else "false"
    if kind == "int":
        return str(int(value))
    if kind == "float":
        v = float(value)
        if math.isnan(v):
            return "nan"
        return repr(v)
    return value


def _parse(text, kind):
    if kind == "bool":
        return text == "true"
    if kind == "int":
        return int(text)
    if kind == "float":
        return float(text)
    return text


def write_records(path, records, header_meta: dict, columns=None):
    """Write dict records with two comment lines (metadata, column types) and a header row.

    Floats use ``repr`` so they parse back bit-identically; lines end in LF.
    """
    records = list(records)
    if columns is None:
        columns = list(records[0]) if records else []
    kinds = [_kind(records[0][c]) if records else "str" for c in columns]
    meta = " ".join(f"{k}={v}" for k, v in header_meta.items())
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# {meta}\n")
        fh.write("# types: " + ",".join(kinds) + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for rec in records:
            writer.writerow([format_value(rec[c]) for c in columns])


def read_records(path):
    """Inverse of :func:`write_records`: ``(metadata, records)``."""
    with open(path, encoding="utf-8", newline="") as fh:
        meta_line = fh.readline()
        types_line = fh.readline()
        rows = list(csv.reader(fh))
    meta = dict(item.split("=", 1) for item in meta_line[1:].split())
    kinds = types_line.split(":", 1)[1].strip().split(",")
    columns, body = rows[0], rows[1:]
    records = [{c: _parse(v, k) for c, v, k in zip(columns, row, kinds)} for row in body]
    return meta, records
