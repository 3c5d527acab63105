"""Reading simulator CSV files and writing sidecar coordinate files.

The simulator emits plain headed CSV with unix newlines; floats carry 17
significant digits and NaN appears as an empty field.  This module mirrors
that convention on the way back out so sidecar files round-trip exactly.
Nothing here ever writes to an input file.
"""

import csv
import math


class PlotDataError(Exception):
    """Input rejected: missing column, empty table, or malformed number."""


def read_table(path) -> tuple[list[str], list[dict[str, str]]]:
    """Header and rows (as string dicts) of a headed CSV file."""
    with open(path, newline="", encoding="utf-8") as fh:
        raw = list(csv.reader(fh))
    if not raw:
        raise PlotDataError(f"{path}: empty file")
    header = raw[0]
    return header, [dict(zip(header, row)) for row in raw[1:]]


def require_columns(header, needed, path) -> None:
    for col in needed:
        if col not in header:
            raise PlotDataError(f"{path}: missing column {col!r}")


def parse_float(text: str, path="input") -> float:
    # empty field is the simulator's NaN encoding
    if text == "":
        return math.nan
    try:
        return float(text)
    except ValueError:
        raise PlotDataError(f"{path}: not a number: {text!r}") from None


def fmt_float(x) -> str:
    """17 significant digits (value-exact round trip); NaN -> empty field."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return f"{float(x):.17g}"


def write_sidecar(path, columns, rows) -> None:
    """Write the plotted-coordinates file; callers pass pre-ordered rows."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        w.writerows(rows)
