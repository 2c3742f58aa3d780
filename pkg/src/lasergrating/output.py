"""Deterministic CSV/JSON writers shared by the CLI.

All files are byte-reproducible: fixed float formatting, sorted JSON keys,
no timestamps.
"""

from __future__ import annotations

import json
from pathlib import Path

VERSION = "0.1.0"


def format_float(value: float) -> str:
    """Fixed 17-significant-digit representation (round-trips doubles)."""
    return format(float(value), ".17g")


def write_csv(path, header_meta: dict, columns: list[str], rows) -> None:
    """CSV with '# key=value' metadata lines before the column header."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        fh.write(f"# version={VERSION}\n")
        for key in sorted(header_meta):
            fh.write(f"# {key}={header_meta[key]}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")


def _cell(value) -> str:
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def read_csv(path):
    """Parse a CSV written by write_csv: returns (meta, columns, rows) with
    floats restored for numeric cells."""
    meta = {}
    columns = None
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# "):
                key, _, val = line[2:].partition("=")
                meta[key] = val
                continue
            cells = line.split(",")
            if columns is None:
                columns = cells
                continue
            parsed = []
            for c in cells:
                try:
                    parsed.append(float(c))
                except ValueError:
                    parsed.append(c)
            rows.append(parsed)
    return meta, columns, rows


def write_manifest(path, command: str, parameters: dict, files: list[str]) -> None:
    payload = {
        "version": VERSION,
        "command": command,
        "parameters": parameters,
        "files": sorted(files),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_json_table(path, header_meta: dict, columns: list[str], rows) -> None:
    payload = {
        "version": VERSION,
        "meta": {k: str(v) for k, v in header_meta.items()},
        "columns": columns,
        "rows": [[_cell(v) for v in row] for row in rows],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
