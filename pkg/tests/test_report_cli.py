"""Run configs, batch manifests, and the command-line front end."""

import json
import os

import pytest
from click.testing import CliRunner

from qecplace import report as rpt
from qecplace.cli import (
    EXIT_CAPACITY,
    EXIT_CONFIG,
    EXIT_PARSE,
    EXIT_ROUTING,
    main,
)

SURFACE3 = '{"family": "surface", "d": 3}'


@pytest.fixture
def runner():
    return CliRunner()


class TestRunConfig:
    def test_defaults(self):
        cfg = rpt.RunConfig(code={"family": "surface", "d": 3})
        assert cfg.seed == 0
        assert cfg.placement == "auto"
        assert cfg.grid_size == 500
        assert cfg.weights == (1.0, 1.0, 1.0, 1.0)
        assert cfg.optimistic == (5.0, 10.0, 4.0, 3.0)

    def test_roundtrip_and_overrides(self, tmp_path):
        cfg = rpt.RunConfig(code={"family": "gross"}, seed=5, max_bumps=3)
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps(cfg.to_dict()))
        loaded = rpt.load_run_config(p)
        assert loaded == cfg
        bumped = rpt.load_run_config(p, {"max_bumps": 7, "seed": None})
        assert bumped.max_bumps == 7 and bumped.seed == 5

    def test_invalid_configs(self):
        with pytest.raises(rpt.ConfigError):
            rpt.RunConfig(code={"family": "surface"}, placement="magic")
        with pytest.raises(rpt.ConfigError):
            rpt.RunConfig(code={"d": 3})
        with pytest.raises(rpt.ConfigError):
            rpt.RunConfig.from_dict({"schema": "run-config/999",
                                     "code": {"family": "gross"}})
        with pytest.raises(rpt.ConfigError):
            rpt.RunConfig.from_dict({"code": {"family": "gross"}, "bogus": 1})

    def test_empty_manifest_rejected(self):
        with pytest.raises(rpt.ConfigError):
            rpt.BatchManifest(entries=())


class TestBuildCode:
    def test_bundled_names(self):
        for name, n, k in (("gross", 144, 12), ("two_gross", 288, 12),
                           ("radial_16", 16, 2), ("tanner_36", 36, 8)):
            bundle = rpt.build_code({"family": name})
            assert (bundle.code.n, bundle.code.k) == (n, k), name

    def test_inline_families(self):
        assert rpt.build_code({"family": "surface", "d": 3}).code.n == 9
        bb = rpt.build_code({"family": "bb", "l": 6, "m": 3,
                             "a": [[0, 0], [0, 1], [2, 0]],
                             "b": [[0, 0], [0, 1], [4, 1]]})
        assert (bb.code.n, bb.code.k) == (36, 8)
        radial = rpt.build_code({"family": "radial", "r": 2, "s": 2})
        assert (radial.code.n, radial.code.k) == (16, 2)

    def test_unknown_family(self):
        with pytest.raises(rpt.ConfigError):
            rpt.build_code({"family": "torus"})


class TestCliExitCodes:
    def test_parse_error(self, runner):
        res = runner.invoke(main, ["generate", '{"family": "surface", '])
        assert res.exit_code == EXIT_PARSE

    def test_missing_file(self, runner, tmp_path):
        res = runner.invoke(main, ["render", str(tmp_path / "nope.json")])
        assert res.exit_code == EXIT_PARSE

    def test_config_error(self, runner):
        res = runner.invoke(main, ["layout", "not_a_code_spec"])
        assert res.exit_code == EXIT_CONFIG

    def test_capacity_error(self, runner, tmp_path):
        res = runner.invoke(main, ["layout", SURFACE3, "--grid-size", "2",
                                   "--out-dir", str(tmp_path)])
        assert res.exit_code == EXIT_CAPACITY

    def test_routing_error_reports_unrouted(self, runner, tmp_path):
        res = runner.invoke(main, ["layout", SURFACE3, "--max-tiers", "0",
                                   "--out-dir", str(tmp_path)])
        assert res.exit_code == EXIT_ROUTING
        assert "unrouted" in res.output

    def test_success_is_zero(self, runner, tmp_path):
        res = runner.invoke(main, ["distance", SURFACE3,
                                   "--trial-budget", "50"])
        assert res.exit_code == 0, res.output
        assert "d=3" in res.output


class TestLayoutCommand:
    def test_surface_square_grid_single_tier(self, runner, tmp_path):
        res = runner.invoke(main, [
            "layout", SURFACE3, "--placement", "square_grid",
            "--out-dir", str(tmp_path)])
        assert res.exit_code == 0, res.output
        assert "c_hw=1.0000" in res.output
        assert "tiers=1" in res.output
        layout_path = tmp_path / "surface_9_0.layout.json"
        assert layout_path.exists()
        doc = json.loads(layout_path.read_text())
        assert doc["num_tiers"] == 1
        # report csv and runtime log written alongside
        csv_text = (tmp_path / "surface_9_0.report.csv").read_text()
        assert csv_text.splitlines()[0].split(",") == list(rpt.REPORT_COLUMNS)
        log = (tmp_path / "runtime_log.csv").read_text()
        assert len(log.splitlines()) == 2

    def test_render_one_svg_per_tier(self, runner, tmp_path):
        res = runner.invoke(main, [
            "layout", SURFACE3, "--placement", "square_grid",
            "--out-dir", str(tmp_path)])
        assert res.exit_code == 0, res.output
        layout_path = str(tmp_path / "surface_9_0.layout.json")
        res = runner.invoke(main, ["render", layout_path,
                                   "--out-dir", str(tmp_path)])
        assert res.exit_code == 0, res.output
        svgs = [f for f in os.listdir(tmp_path) if f.endswith(".svg")]
        assert len(svgs) == 1

    def test_generate_roundtrip(self, runner, tmp_path):
        res = runner.invoke(main, ["generate", SURFACE3,
                                   "--out-dir", str(tmp_path), "-o", "s3.json"])
        assert res.exit_code == 0, res.output
        res = runner.invoke(main, ["layout", str(tmp_path / "s3.json"),
                                   "--placement", "custom_positions",
                                   "--out-dir", str(tmp_path)])
        assert res.exit_code == 0, res.output
        assert "c_hw=1.0000" in res.output


class TestReportAndSweep:
    def test_batch_report_and_sweep_identity(self, runner, tmp_path):
        manifest = {
            "schema": rpt.MANIFEST_SCHEMA,
            "entries": [
                {"code": {"family": "surface", "d": 3},
                 "placement": "square_grid"},
                {"code": {"family": "surface", "d": 5},
                 "placement": "square_grid"},
                {"code": {"family": "missing_family"}},
            ],
        }
        mp = tmp_path / "manifest.json"
        mp.write_text(json.dumps(manifest))
        res = runner.invoke(main, ["report", str(mp), "--out-dir", str(tmp_path)])
        assert res.exit_code == 0, res.output
        assert "2 succeeded, 1 failed" in res.output
        report_csv = tmp_path / "report.csv"
        lines = report_csv.read_text().splitlines()
        assert len(lines) == 3  # header + two rows
        assert (tmp_path / "summary.txt").exists()
        assert (tmp_path / "scatter.csv").exists()

        res = runner.invoke(main, [
            "sweep", "weights", "--reports", str(report_csv),
            "--parameter", "tiers", "--multipliers", "1.0",
            "--out-dir", str(tmp_path)])
        assert res.exit_code == 0, res.output
        out_lines = (tmp_path / "sweep_weights_tiers.csv").read_text().splitlines()
        assert out_lines[0] == "multiplier,family,n,seed,c_hw"
        # multiplier 1.0 reproduces the reported c_hw values
        for line, src in zip(out_lines[1:], lines[1:]):
            c_hw = float(src.split(",")[lines[0].split(",").index("c_hw")])
            assert abs(float(line.split(",")[-1]) - c_hw) < 1e-6

    def test_optimistic_sweep_scales(self, runner, tmp_path):
        manifest = {
            "schema": rpt.MANIFEST_SCHEMA,
            "entries": [{"code": {"family": "surface", "d": 3},
                         "placement": "square_grid"}],
        }
        mp = tmp_path / "manifest.json"
        mp.write_text(json.dumps(manifest))
        res = runner.invoke(main, ["report", str(mp), "--out-dir", str(tmp_path)])
        assert res.exit_code == 0, res.output
        res = runner.invoke(main, [
            "sweep", "optimistic", "--reports", str(tmp_path / "report.csv"),
            "--parameter", "length", "--multipliers", "0.5,1.0,1.5",
            "--out-dir", str(tmp_path)])
        assert res.exit_code == 0, res.output
        text = (tmp_path / "sweep_optimistic_length.csv").read_text()
        assert len(text.splitlines()) == 4
