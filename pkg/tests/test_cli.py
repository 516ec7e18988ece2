import json
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "magnonchain.cli"]

BASE = ["--delta-over-j", "100", "--lambda-over-j", "0.04",
        "--beta", "1/3", "--length", "15"]


def run_cli(args, **kw):
    return subprocess.run(CLI + args, capture_output=True, text=True, **kw)


class TestSuccessPaths:
    def test_spectrum_writes_traceable_files(self, tmp_path):
        out = tmp_path / "run"
        r = run_cli(["spectrum", *BASE, "--output", str(out)])
        assert r.returncode == 0, r.stderr
        manifest = json.loads((out / "manifest.json").read_text())
        lines = (out / "spectrum.csv").read_text().splitlines()
        assert lines[0] == f"# manifest={manifest['manifest']}"
        assert lines[1] == "k_index,k,band,energy"
        assert len(lines) == 2 + 5 * 3  # s=5 momenta, q=3 bands
        assert manifest["params"]["L"] == 15
        assert manifest["continuum_gap"] > 1.0

    def test_reruns_are_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            r = run_cli(["chern", "--delta-over-j", "100",
                         "--lambda-over-j", "0.04", "--beta", "1/3",
                         "--length", "21", "--ndelta", "12",
                         "--output", str(out)])
            assert r.returncode == 0, r.stderr
        assert (a / "chern.csv").read_bytes() == (b / "chern.csv").read_bytes()
        assert (a / "manifest.json").read_bytes() == (b / "manifest.json").read_bytes()

    def test_chern_values(self, tmp_path):
        r = run_cli(["chern", "--delta-over-j", "100", "--lambda-over-j",
                     "0.04", "--beta", "1/3", "--length", "21",
                     "--ndelta", "12", "--output", str(tmp_path)])
        assert r.returncode == 0, r.stderr
        rows = (tmp_path / "chern.csv").read_text().splitlines()[1:]
        assert rows == ["band,chern", "1,1", "2,-2", "3,1"]

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("Delta = 100\nlambda = 0.04\nbeta_p = 1\n"
                       "beta_q = 3\nL = 9\ncommand = dsweep\n"
                       "N_delta = 4\n")
        out = tmp_path / "out"
        r = run_cli(["--config", str(cfg), "--length", "15",
                     "--output", str(out)])
        assert r.returncode == 0, r.stderr
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["params"]["L"] == 15          # flag beats file
        assert manifest["command"] == "dsweep"
        lines = (out / "dsweep.csv").read_text().splitlines()
        assert lines[1] == "delta,state_index,energy"
        assert len(lines) == 2 + 4 * (15 * 14 // 2)

    def test_butterfly_defaults_open_bc(self, tmp_path):
        r = run_cli(["butterfly", "--delta-over-j", "8", "--lambda-over-j",
                     "0.04", "--beta", "0/1", "--length", "10",
                     "--max-q", "3", "--output", str(tmp_path)])
        assert r.returncode == 0, r.stderr
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["params"]["bc"] == "open"
        header = (tmp_path / "butterfly.csv").read_text().splitlines()
        assert header[1].startswith("# energy_shift=")


class TestFailurePaths:
    def test_missing_required_is_exit_2(self, tmp_path):
        r = run_cli(["spectrum", "--output", str(tmp_path)])
        assert r.returncode == 2
        assert "missing required" in r.stderr

    def test_bad_beta_is_exit_2(self, tmp_path):
        r = run_cli(["spectrum", *BASE[:-2], "--beta", "onethird",
                     "--output", str(tmp_path)])
        assert r.returncode == 2

    def test_gap_closing_is_exit_4_and_cleans_up(self, tmp_path):
        r = run_cli(["chern", "--delta-over-j", "100", "--lambda-over-j",
                     "0", "--beta", "1/3", "--length", "15",
                     "--ndelta", "6", "--output", str(tmp_path)])
        assert r.returncode == 4
        assert "touch" in r.stderr or "gap" in r.stderr
        assert not list(tmp_path.glob("*.csv"))
        assert not (tmp_path / "manifest.json").exists()

    def test_unresolved_grid_is_exit_3(self, tmp_path):
        # weak binding at small size: subband integers do not sum to zero
        r = run_cli(["chern", "--delta-over-j", "4", "--lambda-over-j", "1",
                     "--beta", "2/5", "--length", "25", "--ndelta", "12",
                     "--output", str(tmp_path)])
        assert r.returncode == 3
        assert not list(tmp_path.glob("*.csv"))

    def test_unwritable_output_is_exit_5(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        r = run_cli(["spectrum", *BASE, "--output", str(blocker / "sub")])
        assert r.returncode == 5

    def test_open_bc_spectrum_is_exit_2(self, tmp_path):
        r = run_cli(["spectrum", *BASE, "--bc", "open",
                     "--output", str(tmp_path)])
        assert r.returncode == 2
