"""Input parsing: provenance-headed CSVs and the run metadata JSON.

Every input file must start with the producing CLI's '# '-prefixed JSON
provenance line; anything else is rejected.  The SHA-256 of the raw CSV
bytes is kept so the renderer can stamp it into the image metadata.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

GRID_COLUMNS = ["Q", "z", "dtt", "dT"]
RIDGE_COLUMNS = ["Q", "dtt", "dT"]


class SchemaError(ValueError):
    """Input file does not match the expected CSV schema."""


@dataclass(frozen=True)
class GridData:
    Q_axis: np.ndarray
    z_axis: np.ndarray
    dtt: np.ndarray          # shape (len(z_axis), len(Q_axis))
    dT: np.ndarray
    header: dict
    checksum: str


@dataclass(frozen=True)
class RidgeData:
    Q_axis: np.ndarray
    dtt: np.ndarray
    dT: np.ndarray
    header: dict
    checksum: str


def _read_headed_csv(path: str | Path, expected: list[str]
                     ) -> tuple[dict, np.ndarray, str]:
    path = Path(path)
    raw = path.read_bytes()
    checksum = hashlib.sha256(raw).hexdigest()
    lines = raw.decode("utf-8").splitlines()
    if not lines or not lines[0].startswith("# "):
        raise SchemaError(f"{path}: missing provenance header")
    try:
        header = json.loads(lines[0][2:])
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: bad provenance header: {exc}") from exc
    if "config" not in header:
        raise SchemaError(f"{path}: provenance header lacks 'config'")
    if len(lines) < 2:
        raise SchemaError(f"{path}: missing column line")
    columns = lines[1].split(",")
    if columns != expected:
        offending = next((c for a, c in zip(expected, columns) if a != c),
                         None)
        if offending is None:
            offending = (columns + expected)[min(len(columns),
                                                 len(expected))]
        raise SchemaError(
            f"{path}: expected columns {expected}, got {columns} "
            f"(offending column {offending!r})")
    rows = []
    for lineno, line in enumerate(lines[2:], 3):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != len(expected):
            raise SchemaError(f"{path}:{lineno}: expected "
                              f"{len(expected)} fields, got {len(parts)}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise SchemaError(f"{path}:{lineno}: {exc}") from exc
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return header, np.asarray(rows), checksum


def load_grid(path: str | Path) -> GridData:
    """Long-format (Q, z, dtt, dT) CSV pivoted onto its rectangular
    lattice; both axes must be complete (every Q paired with every z)."""
    header, data, checksum = _read_headed_csv(path, GRID_COLUMNS)
    q_axis = np.unique(data[:, 0])
    z_axis = np.unique(data[:, 1])
    nq, nz = len(q_axis), len(z_axis)
    if len(data) != nq * nz:
        raise SchemaError(f"{path}: {len(data)} rows do not fill a "
                          f"{nz}x{nq} lattice")
    qi = np.searchsorted(q_axis, data[:, 0])
    zi = np.searchsorted(z_axis, data[:, 1])
    seen = np.zeros((nz, nq), dtype=bool)
    seen[zi, qi] = True
    if not seen.all():
        raise SchemaError(f"{path}: incomplete lattice")
    dtt = np.empty((nz, nq))
    dT = np.empty((nz, nq))
    dtt[zi, qi] = data[:, 2]
    dT[zi, qi] = data[:, 3]
    return GridData(q_axis, z_axis, dtt, dT, header, checksum)


def load_ridge(path: str | Path) -> RidgeData:
    header, data, checksum = _read_headed_csv(path, RIDGE_COLUMNS)
    q = data[:, 0]
    if not np.all(np.diff(q) > 0):
        raise SchemaError(f"{path}: Q axis not strictly increasing")
    return RidgeData(q, data[:, 1], data[:, 2], header, checksum)


def load_ridge_argmax(path: str | Path | None) -> float | None:
    """Ridge argmax from the CLI's metadata JSON; accepts both the
    standalone ridge metadata and the combined figures-data file.
    Missing or unusable metadata degrades to None with a warning."""
    if path is None:
        warnings.warn("no metadata JSON given; ridge argmax annotation "
                      "omitted")
        return None
    path = Path(path)
    if not path.exists():
        warnings.warn(f"{path}: metadata JSON not found; ridge argmax "
                      "annotation omitted")
        return None
    doc = json.loads(path.read_text())
    node = doc.get("ridge", doc)
    value = node.get("argmax_Q_tt")
    if value is None:
        warnings.warn(f"{path}: no argmax_Q_tt in metadata; annotation "
                      "omitted")
        return None
    return float(value)
