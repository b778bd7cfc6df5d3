"""CSV reading and writing for the documented table layouts."""

from __future__ import annotations

import csv
import io
import re
from fractions import Fraction
from pathlib import Path

from .errors import ParseError, UsageError
from .numerics import Interval, parse_decimal, str_to_int
from .operators import Boundary, ChainSpec
from .schemas import CSV_COLUMNS

_RATIONAL = re.compile(r"\s*([+-]?\d+)/(\d+)\s*")
_INTERVAL = re.compile(r"\s*\[([^,\]]+),([^\]]+)\]\s*")


def parse_scalar_text(text: str):
    """Inverse of :func:`~bellissard.numerics.format_scalar`."""
    m = _INTERVAL.fullmatch(text)
    if m:
        return Interval(parse_scalar_text(m.group(1)), parse_scalar_text(m.group(2)), None)
    m = _RATIONAL.fullmatch(text)
    if m:
        return Fraction(str_to_int(m.group(1)), str_to_int(m.group(2)))
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"not a serialized scalar: {text!r}") from None


def write_table(rows, layout: str) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS[layout])
    writer.writerows(rows)
    return buf.getvalue()


def read_table(text: str, layout: str) -> list[dict[str, str]]:
    """Parse CSV text and check its header against the documented layout."""
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != CSV_COLUMNS[layout]:
        raise ParseError(f"expected columns {CSV_COLUMNS[layout]}, got {reader.fieldnames}")
    return list(reader)


def read_chain_csv(path: str | Path, boundary: Boundary | str = Boundary.FREE) -> ChainSpec:
    """Load a chain from CSV columns (m, K); the last row leaves K empty."""
    rows = read_table(Path(path).read_text(), "chain")
    if not rows:
        raise UsageError("chain file has no masses")
    masses, springs = [], []
    for i, row in enumerate(rows):
        masses.append(parse_decimal(row["m"]))
        k = (row["K"] or "").strip()
        if i < len(rows) - 1:
            if not k:
                raise UsageError(f"row {i + 1}: spring constant missing")
            springs.append(parse_decimal(k))
        elif k:
            raise UsageError("the final row must leave K empty")
    return ChainSpec(masses, springs, boundary)
