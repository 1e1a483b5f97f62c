"""Heatmap and line-plot rendering with deterministic PNG output.

No numerics happen here beyond plotting transforms: the renderer maps
the CSV values straight onto a color scale and stamps the SHA-256 of the
input file into the PNG metadata so consumers can verify the image shows
exactly the data it claims to.  Exactly-zero cells are drawn white so
the support region is visible as a sharp mask.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib
matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import GridData, load_grid, load_ridge, load_ridge_argmax

SOFTWARE_TAG = "ctpgas-figures"
CMAP = "viridis"
FIGSIZE = (6.4, 4.8)
DPI = 100
AX_RECT = (0.12, 0.11, 0.72, 0.82)
CBAR_RECT = (0.87, 0.11, 0.03, 0.82)


@dataclass(frozen=True)
class FigureJob:
    grid_csv: str | None = None
    ridge_csv: str | None = None
    ridge_meta: str | None = None
    out_dtt: str = "dtt.png"
    out_dT: str = "dT.png"
    out_ridge: str = "ridge.png"
    x_label: str = "Q"
    y_label: str = "z"
    mirror: bool = False          # also show the reflected z < 0 strip
    shared_scale: bool = True     # one color range across both panels
    vmax_dtt: float | None = None  # per-panel overrides
    vmax_dT: float | None = None


def _mirrored(values: np.ndarray, z_axis: np.ndarray
              ) -> tuple[np.ndarray, np.ndarray]:
    """Presentation-only reflection to z < 0 (data are z >= 0 only)."""
    keep = z_axis > 0
    return (np.vstack([values[keep][::-1], values]),
            np.concatenate([-z_axis[keep][::-1], z_axis]))


def _cell_extent(axis: np.ndarray) -> tuple[float, float]:
    step = (axis[-1] - axis[0]) / (len(axis) - 1) if len(axis) > 1 else 1.0
    return float(axis[0] - 0.5 * step), float(axis[-1] + 0.5 * step)


def _png_bbox(fig, ax) -> str:
    """Axes data area in PNG pixel coordinates (origin top-left)."""
    height = fig.get_figheight() * fig.dpi
    box = ax.get_window_extent()
    return (f"{box.x0:.3f},{height - box.y1:.3f},"
            f"{box.x1:.3f},{height - box.y0:.3f}")


def _save(fig, ax, path: str | Path, checksum: str,
          extra_meta: dict | None = None) -> None:
    fig.canvas.draw()
    metadata = {"Software": SOFTWARE_TAG,
                "DataChecksum": checksum,
                "DataBbox": _png_bbox(fig, ax)}
    if extra_meta:
        metadata.update(extra_meta)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, metadata=metadata)
    plt.close(fig)


def _heatmap_panel(grid: GridData, values: np.ndarray, vmax: float,
                   label: str, job: FigureJob, out: str | Path) -> None:
    z_axis = grid.z_axis
    if job.mirror:
        values, z_axis = _mirrored(values, z_axis)
    fig = plt.figure(figsize=FIGSIZE, dpi=DPI)
    ax = fig.add_axes(AX_RECT)
    cmap = plt.get_cmap(CMAP).copy()
    cmap.set_bad("white")
    extent = (*_cell_extent(grid.Q_axis), *_cell_extent(z_axis))
    im = ax.imshow(np.ma.masked_equal(values, 0.0), origin="lower",
                   interpolation="nearest", aspect="auto", extent=extent,
                   cmap=cmap, vmin=0.0, vmax=vmax if vmax > 0 else None)
    shell_q = np.array([extent[0], extent[1]])
    ax.plot(shell_q, 0.5 * shell_q, "k--", linewidth=0.9)
    if job.mirror:
        ax.plot(shell_q, -0.5 * shell_q, "k--", linewidth=0.9)
    ax.set_xlim(extent[0], extent[1])
    ax.set_ylim(extent[2], extent[3])
    ax.set_xlabel(job.x_label)
    ax.set_ylabel(job.y_label)
    ax.set_title(label)
    fig.colorbar(im, cax=fig.add_axes(CBAR_RECT))
    _save(fig, ax, out, grid.checksum,
          {"GridShape": f"{values.shape[0]},{values.shape[1]}"})


def render_heatmaps(job: FigureJob) -> list[Path]:
    """Two heatmaps (density and transverse-current measures) with the
    mass-shell line z = Q/2 overlaid; returns the written paths."""
    if job.grid_csv is None:
        raise ValueError("heatmap job needs grid_csv")
    grid = load_grid(job.grid_csv)
    global_max = float(max(np.nanmax(grid.dtt), np.nanmax(grid.dT), 0.0))
    panels = [
        (grid.dtt, job.vmax_dtt, "density consistency measure", job.out_dtt),
        (grid.dT, job.vmax_dT, "transverse-current consistency measure",
         job.out_dT),
    ]
    for values, override, label, out in panels:
        if override is not None:
            vmax = override
        elif job.shared_scale:
            vmax = global_max
        else:
            vmax = float(np.nanmax(values))
        _heatmap_panel(grid, values, vmax, label, job, out)
    return [Path(job.out_dtt), Path(job.out_dT)]


def render_ridge(job: FigureJob) -> Path:
    """Both measures along the mass shell z = Q/2 versus Q, with the
    density-channel argmax annotated when metadata is available."""
    if job.ridge_csv is None:
        raise ValueError("ridge job needs ridge_csv")
    ridge = load_ridge(job.ridge_csv)
    argmax = load_ridge_argmax(job.ridge_meta)
    fig = plt.figure(figsize=FIGSIZE, dpi=DPI)
    ax = fig.add_axes(AX_RECT)
    ax.plot(ridge.Q_axis, ridge.dtt, label="density")
    ax.plot(ridge.Q_axis, ridge.dT, label="transverse current")
    if argmax is not None:
        ax.axvline(argmax, color="0.4", linestyle=":", linewidth=0.9)
        ax.annotate(f"argmax {job.x_label} = {argmax:.3f}",
                    xy=(argmax, float(np.interp(argmax, ridge.Q_axis,
                                                ridge.dtt))),
                    xytext=(5, 8), textcoords="offset points", fontsize=9)
    ax.set_xlabel(job.x_label)
    ax.set_ylabel("consistency measure on z = Q/2")
    ax.legend()
    _save(fig, ax, job.out_ridge, ridge.checksum)
    return Path(job.out_ridge)
