"""Renderer acceptance: golden-image identity on the 10x10 synthetic
grid and the strip-mask agreement between image pixels and CSV data."""

import numpy as np
import pytest

import synth
from conftest import GOLDEN_DIR
from imgutil import cell_mask
from figrender import FigureJob, render_heatmaps, render_ridge


@pytest.fixture()
def rendered(grid_csv, ridge_csv, ridge_meta, tmp_path):
    dtt, dT = render_heatmaps(FigureJob(
        grid_csv=str(grid_csv),
        out_dtt=str(tmp_path / "dtt.png"),
        out_dT=str(tmp_path / "dT.png")))
    ridge = render_ridge(FigureJob(
        ridge_csv=str(ridge_csv), ridge_meta=str(ridge_meta),
        out_ridge=str(tmp_path / "ridge.png")))
    return {"dtt.png": dtt, "dT.png": dT, "ridge.png": ridge}


def test_golden_images_byte_identical(rendered):
    for name, path in rendered.items():
        golden = GOLDEN_DIR / name
        assert golden.exists(), f"golden {name} missing; run make_goldens.py"
        assert path.read_bytes() == golden.read_bytes(), name


def test_nonzero_pixel_mask_matches_csv_strip_mask(rendered):
    for channel, name in ((0, "dtt.png"), (1, "dT.png")):
        expected = np.array(
            [[synth.strip_values(q, z)[channel] > 0 for q in synth.Q_AXIS]
             for z in synth.Z_AXIS])
        assert np.array_equal(cell_mask(rendered[name]), expected), name
