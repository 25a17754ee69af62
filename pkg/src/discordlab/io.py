"""Scatter CSV and run manifest serialization."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

from .errors import DiscordLabError
from .estimators import ScatterPoint

CSV_COLUMNS = (
    "channel_id",
    "a",
    "weight_entropy_bits",
    "avg_discord_bits",
    "avg_distortion",
    "n_states",
    "argmin_mode",
)


class CsvFormatError(DiscordLabError):
    pass


def format_float(x: float) -> str:
    # 17 significant digits round-trip every double
    return format(x, ".17g")


def format_row(pt: ScatterPoint) -> str:
    fields = (
        str(pt.channel_id),
        format_float(pt.a),
        format_float(pt.weight_entropy),
        format_float(pt.avg_discord),
        format_float(pt.avg_distortion),
        str(pt.n_states),
        str(pt.argmin_mode),
    )
    return ",".join(fields) + "\n"


def header_line() -> str:
    return ",".join(CSV_COLUMNS) + "\n"


def write_scatter(path, points) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(header_line())
        for pt in points:
            fh.write(format_row(pt))


def _parse_row(row: list[str], lineno: int) -> ScatterPoint:
    if len(row) != len(CSV_COLUMNS):
        raise CsvFormatError(f"line {lineno}: expected {len(CSV_COLUMNS)} fields, got {len(row)}")
    try:
        return ScatterPoint(
            channel_id=int(row[0]),
            a=float(row[1]),
            weight_entropy=float(row[2]),
            avg_discord=float(row[3]),
            avg_distortion=float(row[4]),
            n_states=int(row[5]),
            argmin_mode=int(row[6]),
        )
    except ValueError as exc:
        raise CsvFormatError(f"line {lineno}: {exc}") from None


def read_scatter(path) -> list[ScatterPoint]:
    """Parse a scatter CSV; errors name the offending line."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise CsvFormatError(f"{path}: empty file")
        if tuple(h.strip() for h in header) != CSV_COLUMNS:
            raise CsvFormatError(f"line 1: header must be {','.join(CSV_COLUMNS)}")
        points = [_parse_row(row, i) for i, row in enumerate(reader, start=2) if row]
    if not points:
        raise CsvFormatError(f"{path}: no data rows")
    for pt in points:
        if not (math.isfinite(pt.avg_discord) and math.isfinite(pt.avg_distortion)):
            raise CsvFormatError(f"channel {pt.channel_id}: non-finite discord or distortion")
    return points


def read_manifest(path) -> dict:
    path = Path(path)
    if not path.exists():
        return {}
    return json.loads(path.read_text())


def write_manifest(path, manifest: dict) -> None:
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
