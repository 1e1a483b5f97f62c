"""PNG inspection helpers for the renderer tests."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

WHITE = (255, 255, 255)


def png_text(path: Path) -> dict:
    with Image.open(path) as img:
        return dict(img.text)


def cell_mask(path: Path) -> np.ndarray:
    """True where a heatmap cell's center pixel is not white; shape
    (nz, nq) with row 0 the lowest z (data orientation)."""
    with Image.open(path) as img:
        meta = dict(img.text)
        arr = np.asarray(img.convert("RGB"))
    x0, y0, x1, y1 = (float(v) for v in meta["DataBbox"].split(","))
    nz, nq = (int(v) for v in meta["GridShape"].split(","))
    mask = np.zeros((nz, nq), dtype=bool)
    for i in range(nz):
        py = int(round(y1 - (i + 0.5) * (y1 - y0) / nz))
        for j in range(nq):
            px = int(round(x0 + (j + 0.5) * (x1 - x0) / nq))
            mask[i, j] = tuple(arr[py, px]) != WHITE
    return mask
