"""Batch figure renderer for ctpgas grid/ridge CSV outputs."""

from .io import (GridData, RidgeData, SchemaError, load_grid, load_ridge,
                 load_ridge_argmax)
from .render import FigureJob, render_heatmaps, render_ridge

__all__ = [
    "FigureJob",
    "GridData",
    "RidgeData",
    "SchemaError",
    "load_grid",
    "load_ridge",
    "load_ridge_argmax",
    "render_heatmaps",
    "render_ridge",
]
