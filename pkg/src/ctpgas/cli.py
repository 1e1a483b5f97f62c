"""Command-line front end.

Subcommands: response, kernels, grid, ridge, hydrofit, staticflow,
figures-data.  Exit codes: 0 success, 2 usage error, 3 numeric failure,
4 partial grid with defects.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import bare_action, decoherence, hydro, response
from .config import RunConfig, UsageError, header_line, parse_config_file, \
    resolve_config, write_csv, write_json
from .gas import GasSpec, Mode
from .quadrature import Tolerance

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_PARTIAL = 4


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ctpgas",
        description="Response, decoherence and hydrodynamics of an ideal "
                    "quantum gas")
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--outdir", help="output directory (overrides config; "
                                    "CTPGAS_OUTDIR overrides both)")
    p.add_argument("--statistics", choices=["fermion", "boson"])
    p.add_argument("--ns", type=int, dest="n_s")
    p.add_argument("--temperature", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--seed", type=int)

    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("response", help="tensor components per mode")
    sp.add_argument("--modes", required=True,
                    help="semicolon-separated Q,z pairs, e.g. '1,0.5;2,1'")

    sp = sub.add_parser("kernels", help="bare-action kernels per mode")
    sp.add_argument("--modes", required=True)

    sub.add_parser("grid", help="decoherence measures on a (Q, z) grid")
    sub.add_parser("ridge", help="measures along the mass shell z = Q/2")
    sub.add_parser("hydrofit", help="hydrodynamic-limit coefficients")
    sub.add_parser("staticflow", help="static Gaussian-source flow profile")
    sub.add_parser("figures-data",
                   help="grid + ridge data set with metadata")
    return p


def _parse_modes(text: str) -> list[Mode]:
    modes = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        try:
            q_str, z_str = part.split(",")
            modes.append(Mode(float(q_str), float(z_str)))
        except ValueError as exc:
            raise UsageError(f"bad mode {part!r}: {exc}") from exc
    if not modes:
        raise UsageError("no modes given")
    return modes


def _tol(config: RunConfig) -> Tolerance:
    return Tolerance(rel=config.tol_rel, abs=config.tol_abs)


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------

def _cmd_response(config: RunConfig, outdir: Path, modes: list[Mode]) -> int:
    spec = config.gas_spec()
    tol = _tol(config)
    cols = ["Q", "z", "Ltt", "Lts", "LL", "LT",
            "Rtt_plus", "Rts_plus", "RL_plus", "RT_plus",
            "Rtt_minus", "Rts_minus", "RL_minus", "RT_minus",
            "Stt_plus", "Stt_minus", "ST_plus", "ST_minus"]
    rows = []
    for mode in modes:
        b = response.response_blocks(spec, mode, tol)
        rows.append([b.Q, b.z, b.ltt, b.lts, b.ll, b.lt,
                     b.rtt_p, b.rts_p, b.rl_p, b.rt_p,
                     b.rtt_m, b.rts_m, b.rl_m, b.rt_m,
                     b.stt_p, b.stt_m, b.st_p, b.st_m])
    write_csv(outdir / "response.csv", config, cols, rows,
              {"units": "tt,ts in g0; L,T in gT"})
    return EXIT_OK


def _cmd_kernels(config: RunConfig, outdir: Path, modes: list[Mode]) -> int:
    spec = config.gas_spec()
    tol = _tol(config)
    cols = ["Q", "z", "re_tt_real", "re_tt_imag", "im_tt",
            "re_T_real", "re_T_imag", "im_T"]
    rows = []
    for mode in modes:
        b = response.response_blocks(spec, mode, tol)
        k = bare_action.bare_kernels(b, spec)
        rows.append([k.Q, k.z, k.re_tt.real, k.re_tt.imag, k.im_tt,
                     k.re_T.real, k.re_T.imag, k.im_T])
    write_csv(outdir / "kernels.csv", config, cols, rows,
              {"units": "internal hbar = m = k_gas = 1"})
    return EXIT_OK


def _grid_outputs(config: RunConfig, outdir: Path):
    spec = config.gas_spec()
    grid = decoherence.d_grid(
        spec,
        Q_range=(config.grid_q_min, config.grid_q_max),
        z_range=(config.grid_z_min, config.grid_z_max),
        resolution=(config.grid_nq, config.grid_nz))
    rows = []
    for i, z in enumerate(grid.z_axis):
        for j, q in enumerate(grid.Q_axis):
            rows.append([float(q), float(z),
                         float(grid.dtt[i, j]), float(grid.dT[i, j])])
    write_csv(outdir / "grid.csv", config, ["Q", "z", "dtt", "dT"], rows,
              {"kind": "decoherence-grid"})
    meta = {
        "kind": "decoherence-grid",
        "n_defects": len(grid.defects),
        "defects": grid.defects[:50],
    }
    return grid, meta


def _ridge_outputs(config: RunConfig, outdir: Path):
    spec = config.gas_spec()
    ridge = decoherence.ridge_profile(
        spec,
        Q_range=(config.ridge_q_min, config.ridge_q_max),
        resolution=config.ridge_n)
    rows = [[float(q), float(dt), float(dT)] for q, dt, dT in
            zip(ridge.Q_axis, ridge.dtt_on_shell, ridge.dT_on_shell)]
    write_csv(outdir / "ridge.csv", config, ["Q", "dtt", "dT"], rows,
              {"kind": "decoherence-ridge"})
    meta = {
        "kind": "decoherence-ridge",
        "argmax_Q_tt": ridge.argmax_Q_tt,
        "n_defects": len(ridge.defects),
    }
    return ridge, meta


def _cmd_grid(config: RunConfig, outdir: Path) -> int:
    grid, meta = _grid_outputs(config, outdir)
    write_json(outdir / "grid_meta.json", config, meta)
    return EXIT_PARTIAL if grid.defects else EXIT_OK


def _cmd_ridge(config: RunConfig, outdir: Path) -> int:
    ridge, meta = _ridge_outputs(config, outdir)
    write_json(outdir / "ridge_meta.json", config, meta)
    return EXIT_PARTIAL if ridge.defects else EXIT_OK


def _cmd_figures_data(config: RunConfig, outdir: Path) -> int:
    grid, gmeta = _grid_outputs(config, outdir)
    ridge, rmeta = _ridge_outputs(config, outdir)
    write_json(outdir / "metadata.json", config,
               {"grid": gmeta, "ridge": rmeta})
    return EXIT_PARTIAL if (grid.defects or ridge.defects) else EXIT_OK


def _cmd_hydrofit(config: RunConfig, outdir: Path) -> int:
    spec = config.gas_spec()
    coeffs = hydro.fit_hydro_coefficients(
        spec, window=(config.hydro_q_max, config.hydro_z_max))
    write_json(outdir / "hydrofit.json", config, {
        "a0": coeffs.a0, "az": coeffs.az, "akk": coeffs.akk,
        "b0": coeffs.b0, "bz": coeffs.bz, "bkk": coeffs.bkk,
        "g0": coeffs.g0, "gT": coeffs.gT,
        "fit_window": list(coeffs.fit_window),
        "fit_residual": coeffs.fit_residual,
        "halved_window_drift": coeffs.halved_window_drift,
    })
    return EXIT_OK


def _cmd_staticflow(config: RunConfig, outdir: Path) -> int:
    spec = config.gas_spec()
    prof = hydro.static_flow(
        spec, ell_ext=config.flow_ell_ext,
        amplitude=config.flow_amplitude,
        channel=config.flow_channel, mode_tag=config.flow_mode)
    col = "n_x" if config.flow_channel == "density" else "jT_x"
    rows = [[float(x), float(v)] for x, v in
            zip(prof.x_axis, prof.values)]
    write_csv(outdir / "staticflow.csv", config, ["x", col], rows,
              {"kind": "static-flow"})
    write_json(outdir / "staticflow.json", config, {
        "ell_ext": prof.ell_ext,
        "ell_flow": prof.ell_flow_fitted,
        "ell_flow_gauss_fit": prof.ell_flow_gauss_fit,
        "gauss_fit_residual": prof.gauss_fit_residual,
        "channel": prof.channel,
        "mode": prof.mode_tag,
    })
    return EXIT_OK


# ---------------------------------------------------------------------------

def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        file_values = (parse_config_file(args.config)
                       if args.config else None)
        flags = {k: getattr(args, k, None) for k in
                 ("statistics", "n_s", "temperature", "mu", "seed",
                  "outdir")}
        config = resolve_config(file_values, flags)
        outdir = Path(os.environ.get("CTPGAS_OUTDIR", config.outdir))

        if args.command == "response":
            return _cmd_response(config, outdir, _parse_modes(args.modes))
        if args.command == "kernels":
            return _cmd_kernels(config, outdir, _parse_modes(args.modes))
        if args.command == "grid":
            return _cmd_grid(config, outdir)
        if args.command == "ridge":
            return _cmd_ridge(config, outdir)
        if args.command == "figures-data":
            return _cmd_figures_data(config, outdir)
        if args.command == "hydrofit":
            return _cmd_hydrofit(config, outdir)
        if args.command == "staticflow":
            return _cmd_staticflow(config, outdir)
        raise UsageError(f"unknown command {args.command}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, RuntimeError, ValueError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
