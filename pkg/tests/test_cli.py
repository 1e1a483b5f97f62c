import json
import math

import numpy as np
import pytest

from ctpgas import cli
from ctpgas.config import (RunConfig, UsageError, header_line, parse_header,
                           parse_config_file, resolve_config, write_csv)

SMALL = """
# reduced windows for fast tests
grid_q_min = 0.5
grid_q_max = 3.0
grid_z_min = 0.0
grid_z_max = 2.0
grid_nq = 6
grid_nz = 5
ridge_q_min = 0.5
ridge_q_max = 3.0
ridge_n = 6
tol_rel = 1e-7
tol_abs = 1e-10
"""


@pytest.fixture()
def small_config(tmp_path):
    path = tmp_path / "small.cfg"
    path.write_text(SMALL)
    return path


def run(tmp_path, *args):
    return cli.main(["--outdir", str(tmp_path), *args])


class TestConfig:
    def test_defaults(self):
        config = resolve_config(None, None)
        assert config == RunConfig()
        assert config.statistics == "fermion"

    def test_file_parsing_ignores_comments_and_blanks(self, small_config):
        values = parse_config_file(small_config)
        assert values["grid_nq"] == 6
        assert "statistics" not in values

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("grd_nq = 6\n")
        with pytest.raises(UsageError, match="grd_nq"):
            parse_config_file(path)

    def test_malformed_line_rejected(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("grid_nq 6\n")
        with pytest.raises(UsageError, match="key = value"):
            parse_config_file(path)

    def test_flag_beats_file_beats_default(self):
        config = resolve_config({"mu": 0.7, "n_s": 1}, {"mu": 0.9})
        assert config.mu == 0.9       # flag wins
        assert config.n_s == 1        # file wins over default
        assert config.temperature == 0.0  # default survives

    def test_invalid_combination_names_field(self):
        with pytest.raises(UsageError, match="mu"):
            resolve_config({"statistics": "boson", "mu": 0.1},
                           None).gas_spec()

    def test_header_round_trip(self):
        config = RunConfig(grid_nq=7, mu=0.25)
        head = parse_header(header_line(config, {"kind": "test"}))
        assert RunConfig.from_dict(head["config"]) == config
        assert head["kind"] == "test"

    def test_csv_written_atomically_with_header(self, tmp_path):
        target = tmp_path / "out" / "data.csv"
        write_csv(target, RunConfig(), ["a", "b"], [[1.0, 2.0]])
        lines = target.read_text().splitlines()
        assert parse_header(lines[0])["config"]["statistics"] == "fermion"
        assert lines[1] == "a,b"
        assert lines[2] == "1,2"
        leftovers = [p for p in target.parent.iterdir() if p != target]
        assert leftovers == []


class TestModeParsing:
    def test_parse_modes(self):
        modes = cli._parse_modes("1,0.5; 2,1.0")
        assert [(m.Q, m.z) for m in modes] == [(1.0, 0.5), (2.0, 1.0)]

    def test_bad_modes_rejected(self):
        with pytest.raises(UsageError):
            cli._parse_modes("1;2")
        with pytest.raises(UsageError):
            cli._parse_modes("")


class TestSubcommands:
    def test_response_csv(self, tmp_path):
        status = run(tmp_path, "response", "--modes", "2,1;1,3")
        assert status == cli.EXIT_OK
        lines = (tmp_path / "response.csv").read_text().splitlines()
        header = lines[1].split(",")
        on_strip = dict(zip(header, lines[2].split(",")))
        off_strip = dict(zip(header, lines[3].split(",")))
        assert float(on_strip["Rtt_plus"]) > 0.0
        assert float(off_strip["Rtt_plus"]) == 0.0
        assert float(off_strip["Stt_plus"]) == 0.0

    def test_kernels_csv(self, tmp_path):
        status = run(tmp_path, "kernels", "--modes", "2,1")
        assert status == cli.EXIT_OK
        lines = (tmp_path / "kernels.csv").read_text().splitlines()
        row = dict(zip(lines[1].split(","), lines[2].split(",")))
        assert float(row["im_tt"]) >= 0.0

    def test_grid_outputs(self, tmp_path, small_config):
        status = cli.main(["--config", str(small_config),
                           "--outdir", str(tmp_path), "grid"])
        assert status == cli.EXIT_OK
        meta = json.loads((tmp_path / "grid_meta.json").read_text())
        assert meta["n_defects"] == 0
        rows = (tmp_path / "grid.csv").read_text().splitlines()[2:]
        assert len(rows) == 6 * 5

    def test_ridge_outputs(self, tmp_path, small_config):
        status = cli.main(["--config", str(small_config),
                           "--outdir", str(tmp_path), "ridge"])
        assert status == cli.EXIT_OK
        meta = json.loads((tmp_path / "ridge_meta.json").read_text())
        assert math.isfinite(meta["argmax_Q_tt"])

    def test_figures_data_bundle(self, tmp_path, small_config):
        status = cli.main(["--config", str(small_config),
                           "--outdir", str(tmp_path), "figures-data"])
        assert status == cli.EXIT_OK
        for name in ("grid.csv", "ridge.csv", "metadata.json"):
            assert (tmp_path / name).exists()

    def test_hydrofit_json(self, tmp_path):
        status = run(tmp_path, "hydrofit")
        assert status == cli.EXIT_OK
        doc = json.loads((tmp_path / "hydrofit.json").read_text())
        assert doc["a0"] == pytest.approx(0.5, rel=0.01)

    def test_staticflow_outputs(self, tmp_path):
        status = run(tmp_path, "staticflow")
        assert status == cli.EXIT_OK
        doc = json.loads((tmp_path / "staticflow.json").read_text())
        assert doc["ell_flow"] == pytest.approx(math.sqrt(4.0 / 3.0),
                                                rel=1e-5)

    def test_outdir_env_override(self, tmp_path, monkeypatch):
        override = tmp_path / "elsewhere"
        monkeypatch.setenv("CTPGAS_OUTDIR", str(override))
        status = run(tmp_path / "ignored", "response", "--modes", "1,0.4")
        assert status == cli.EXIT_OK
        assert (override / "response.csv").exists()
        assert not (tmp_path / "ignored" / "response.csv").exists()


class TestExitCodes:
    def test_usage_error_bad_spec(self, tmp_path, capsys):
        status = run(tmp_path, "--statistics", "boson", "--mu", "0.1",
                     "response", "--modes", "1,0.5")
        assert status == cli.EXIT_USAGE
        assert "mu" in capsys.readouterr().err

    def test_usage_error_unknown_config_key(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("nonsense = 1\n")
        status = cli.main(["--config", str(bad), "--outdir", str(tmp_path),
                           "grid"])
        assert status == cli.EXIT_USAGE

    def test_numeric_failure(self, tmp_path, capsys):
        bad = tmp_path / "flow.cfg"
        bad.write_text("flow_ell_ext = 1e-4\n")
        status = cli.main(["--config", str(bad), "--outdir", str(tmp_path),
                           "staticflow"])
        assert status == cli.EXIT_NUMERIC
        assert "numeric" in capsys.readouterr().err


class TestDeterminism:
    def test_rerun_byte_identical(self, tmp_path, small_config):
        args = ["--config", str(small_config), "--outdir", str(tmp_path),
                "figures-data"]
        names = ("grid.csv", "ridge.csv", "metadata.json")
        assert cli.main(args) == cli.EXIT_OK
        first = {n: (tmp_path / n).read_bytes() for n in names}
        assert cli.main(args) == cli.EXIT_OK
        for n in names:
            assert (tmp_path / n).read_bytes() == first[n]
