"""
Deterministic CSV/JSON emission.

Floats are written with repr() (shortest round-trip form), so parsing a
file back with float() reproduces the in-memory values exactly.
"""

import csv
import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np


def _cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def plain(value: Any) -> Any:
    """Convert numpy and complex values into JSON-native types."""
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return [plain(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, Path):
        return str(value)
    return value


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    return path


def write_json(path: Path, payload: Any) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(plain(payload), f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def write_table(
    out_dir: Path,
    stem: str,
    header: Sequence[str],
    rows: Sequence[Sequence[Any]],
    fmt: str,
) -> Path:
    """A table as <stem>.csv, or as <stem>.json (list of records) when fmt is json."""
    if fmt == "json":
        records: List[Dict[str, Any]] = [dict(zip(header, row)) for row in rows]
        return write_json(out_dir / f"{stem}.json", records)
    return write_csv(out_dir / f"{stem}.csv", header, rows)
