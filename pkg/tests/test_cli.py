import re

import pytest

from beamtrack.cli import cli_main


def run_cli(capsys, argv):
    code = cli_main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGeometry:
    def test_reference_location(self, capsys):
        code, out, _ = run_cli(capsys, ["geometry"])
        assert code == 0
        values = dict(
            line.split(" = ") for line in out.strip().splitlines() if " = " in line
        )
        assert float(values["heading_offset_deg"]) == pytest.approx(6.111, abs=1e-3)
        assert float(values["elevation_deg"]) == pytest.approx(49.9978, abs=1e-3)
        assert float(values["polarization_deg"]) == pytest.approx(5.047, abs=1e-3)

    def test_explicit_arguments(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["geometry", "--lat", "34.27", "--lon", "108.95", "--sat-lon", "105.5"],
        )
        assert code == 0
        assert "gimbal_azimuth_deg" in out

    def test_below_horizon_is_runtime_error(self, capsys):
        code, _, err = run_cli(capsys, ["geometry", "--lat", "85"])
        assert code == 1
        assert "error" in err

    def test_bad_attitude_usage(self, capsys):
        code, _, err = run_cli(capsys, ["geometry", "--attitude", "1,2"])
        assert code == 2


class TestSimulate:
    def test_missing_config_exits_2_with_usage(self, capsys):
        code, _, err = run_cli(capsys, ["simulate", "--config", "/no/such/file.ini"])
        assert code == 2
        assert "usage" in err.lower()

    def test_short_run_writes_outputs(self, capsys, tmp_path):
        cfg = tmp_path / "s.ini"
        cfg.write_text(
            "[array]\nrows = 8\ncols = 4\n[run]\nduration = 1\n"
            "[electrical]\nfirst_epoch = 100\n"
        )
        code, out, _ = run_cli(
            capsys, ["simulate", "--config", str(cfg), "--out", str(tmp_path / "o")]
        )
        assert code == 0
        assert (tmp_path / "o" / "trace.csv").exists()
        assert (tmp_path / "o" / "trace.json").exists()
        assert "final nrsp" in out

    def test_seed_override_changes_trace(self, capsys, tmp_path):
        cfg = tmp_path / "s.ini"
        cfg.write_text(
            "[array]\nrows = 8\ncols = 4\n[run]\nduration = 1\n"
            "[electrical]\nfirst_epoch = 100\n"
        )
        outs = []
        for seed in ("1", "2"):
            out_dir = tmp_path / f"o{seed}"
            code, _, _ = run_cli(
                capsys,
                ["simulate", "--config", str(cfg), "--seed", seed, "--out", str(out_dir)],
            )
            assert code == 0
            outs.append((out_dir / "trace.csv").read_bytes())
        assert outs[0] != outs[1]

    def test_bad_config_value_is_runtime_error(self, capsys, tmp_path):
        cfg = tmp_path / "bad.ini"
        cfg.write_text("[array]\nrows = 0\n")
        code, _, err = run_cli(capsys, ["simulate", "--config", str(cfg)])
        assert code == 1
        assert "error" in err


class TestSweep:
    def test_row_count_is_values_times_methods(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["sweep", "--values", "20,10", "--seeds", "2", "--methods", "assp,spsa"],
        )
        assert code == 0
        lines = [l for l in out.strip().splitlines() if re.match(r"\s*\d", l)]
        assert len(lines) == 2 * 2

    def test_unknown_method_usage_error(self, capsys):
        code, _, err = run_cli(
            capsys, ["sweep", "--values", "20", "--methods", "foo"]
        )
        assert code == 2

    def test_unknown_param_usage_error(self, capsys):
        code, _, err = run_cli(
            capsys, ["sweep", "--param", "bogus", "--values", "1"]
        )
        assert code == 2

    def test_usage_error_without_values(self, capsys):
        assert cli_main(["sweep"]) == 2
        capsys.readouterr()
