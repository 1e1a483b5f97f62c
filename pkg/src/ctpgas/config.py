"""Run configuration: defaults, flat key-value config file, flag
precedence, and provenance headers for every output file."""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .gas import GasSpec, InvalidSpecError, Statistics


class UsageError(ValueError):
    """Invalid configuration; message names the offending field."""


#: documented config keys and their parsers
_KEYS = {
    "statistics": str,
    "n_s": int,
    "temperature": float,
    "mu": float,
    "tol_rel": float,
    "tol_abs": float,
    "grid_q_min": float,
    "grid_q_max": float,
    "grid_z_min": float,
    "grid_z_max": float,
    "grid_nq": int,
    "grid_nz": int,
    "ridge_q_min": float,
    "ridge_q_max": float,
    "ridge_n": int,
    "hydro_q_max": float,
    "hydro_z_max": float,
    "flow_ell_ext": float,
    "flow_amplitude": float,
    "flow_channel": str,
    "flow_mode": str,
    "outdir": str,
    "seed": int,
}


@dataclass(frozen=True)
class RunConfig:
    statistics: str = "fermion"
    n_s: int = 2
    temperature: float = 0.0
    mu: float = 0.5
    tol_rel: float = 1e-9
    tol_abs: float = 1e-12
    grid_q_min: float = 0.025
    grid_q_max: float = 6.0
    grid_z_min: float = 0.0
    grid_z_max: float = 4.0
    grid_nq: int = 240
    grid_nz: int = 160
    ridge_q_min: float = 0.05
    ridge_q_max: float = 6.0
    ridge_n: int = 120
    hydro_q_max: float = 0.1
    hydro_z_max: float = 0.05
    flow_ell_ext: float = 1.0
    flow_amplitude: float = 1.0
    flow_channel: str = "density"
    flow_mode: str = "gaussian-approx"
    outdir: str = "."
    seed: int = 20240817

    def gas_spec(self) -> GasSpec:
        try:
            return GasSpec(
                statistics=Statistics(self.statistics),
                spin_degeneracy=self.n_s,
                temperature=self.temperature,
                chemical_potential=self.mu)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc

    def validate(self) -> "RunConfig":
        if self.statistics not in ("fermion", "boson"):
            raise UsageError("statistics must be fermion or boson")
        self.gas_spec()
        if self.tol_rel <= 0 or self.tol_abs <= 0:
            raise UsageError("tolerances must be positive (tol_rel/tol_abs)")
        if self.grid_q_min <= 0 or self.ridge_q_min <= 0:
            raise UsageError("Q ranges must be positive (grid_q_min)")
        if self.flow_channel not in ("density", "transverse"):
            raise UsageError("flow_channel must be density or transverse")
        if self.flow_mode not in ("exact", "gaussian-approx"):
            raise UsageError("flow_mode must be exact or gaussian-approx")
        return self

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        unknown = set(d) - set(_KEYS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        typed = {k: _KEYS[k](v) for k, v in d.items()}
        return cls(**typed).validate()


def parse_config_file(path: str | Path) -> dict:
    """Flat `key = value` file; blank lines and # comments ignored;
    unknown keys rejected."""
    values: dict = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _KEYS[key](val)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {exc}")
    return values


def resolve_config(file_values: dict | None,
                   flag_values: dict | None) -> RunConfig:
    """Precedence: flags > config file > defaults."""
    merged: dict = {}
    if file_values:
        merged.update(file_values)
    if flag_values:
        merged.update({k: v for k, v in flag_values.items()
                       if v is not None})
    return RunConfig.from_dict(merged)


# ---------------------------------------------------------------------------
# output files
# ---------------------------------------------------------------------------

def header_line(config: RunConfig, extra: dict | None = None) -> str:
    head = {"config": config.to_dict()}
    if extra:
        head.update(extra)
    return "# " + json.dumps(head, sort_keys=True)


def parse_header(line: str) -> dict:
    if not line.startswith("# "):
        raise ValueError("missing provenance header")
    return json.loads(line[2:])


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str | Path, config: RunConfig, columns: list[str],
              rows, extra_header: dict | None = None) -> None:
    """CSV with a '#'-prefixed JSON provenance line; written atomically
    (temp file + rename) with deterministic number formatting."""
    lines = [header_line(config, extra_header), ",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _atomic_write(Path(path), "\n".join(lines) + "\n")


def write_json(path: str | Path, config: RunConfig, payload: dict) -> None:
    doc = {"config": config.to_dict(), **payload}
    _atomic_write(Path(path), json.dumps(doc, sort_keys=True, indent=2)
                  + "\n")


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)
