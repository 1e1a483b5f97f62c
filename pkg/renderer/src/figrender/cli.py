"""Command-line entry point: `ctpgas-figures heatmaps|ridge`."""

from __future__ import annotations

import argparse
import sys

from .io import SchemaError
from .render import FigureJob, render_heatmaps, render_ridge

EXIT_OK = 0
EXIT_USAGE = 2


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ctpgas-figures",
        description="Render heatmap / ridge figures from ctpgas CSV "
                    "outputs")
    p.add_argument("--x-label", default="Q")
    p.add_argument("--y-label", default="z")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("heatmaps", help="two (Q, z) heatmaps from a "
                                         "grid CSV")
    sp.add_argument("--grid", required=True, help="grid CSV path")
    sp.add_argument("--out-dtt", default="dtt.png")
    sp.add_argument("--out-dt", default="dT.png")
    sp.add_argument("--mirror", action="store_true",
                    help="also show the reflected z < 0 strip")
    sp.add_argument("--per-panel-scale", action="store_true",
                    help="scale each panel's colors independently")
    sp.add_argument("--vmax-dtt", type=float)
    sp.add_argument("--vmax-dt", type=float)

    sp = sub.add_parser("ridge", help="line plot along the mass shell")
    sp.add_argument("--ridge", required=True, help="ridge CSV path")
    sp.add_argument("--meta", help="metadata JSON with the argmax")
    sp.add_argument("--out", default="ridge.png")
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "heatmaps":
            job = FigureJob(grid_csv=args.grid, out_dtt=args.out_dtt,
                            out_dT=args.out_dt, mirror=args.mirror,
                            shared_scale=not args.per_panel_scale,
                            vmax_dtt=args.vmax_dtt, vmax_dT=args.vmax_dt,
                            x_label=args.x_label, y_label=args.y_label)
            for path in render_heatmaps(job):
                print(path)
        else:
            job = FigureJob(ridge_csv=args.ridge, ridge_meta=args.meta,
                            out_ridge=args.out, x_label=args.x_label,
                            y_label=args.y_label)
            print(render_ridge(job))
        return EXIT_OK
    except (SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
