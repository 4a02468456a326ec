from lsim.cli import main


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestExitCodes:
    def test_unknown_scenario_is_usage_error(self, capsys):
        code, _, err = run(["warp-drive"], capsys)
        assert code == 2
        assert "fig2" in err and "slowlight" in err

    def test_bad_override_is_config_error(self, capsys):
        code, _, err = run(["fig2", "--set", "bogus_key=1"], capsys)
        assert code == 2
        assert "bogus_key" in err

    def test_bad_config_file_reports_line(self, tmp_path, capsys):
        cfg = tmp_path / "broken.cfg"
        cfg.write_text("dt_us = 0.01\nbogus_key = 1\n", encoding="utf-8")
        code, _, err = run(["fig2", "--config", str(cfg)], capsys)
        assert code == 2
        assert "broken.cfg:2" in err

    def test_regime_violation_is_numerical_error(self, tmp_path, capsys):
        code, _, err = run(["slowlight", "--out", str(tmp_path / "o"),
                            "--set", "probe_rabi_khz=100"], capsys)
        assert code == 3
        assert "weak-probe" in err

    def test_rejected_domain_value_is_config_error(self, tmp_path, capsys):
        code, _, err = run(["fig2", "--out", str(tmp_path / "o"),
                            "--set", "gamma12_khz=-1"], capsys)
        assert code == 2
        assert "gamma12_khz" in err

    def test_step_guard_violation_is_config_error(self, tmp_path, capsys):
        code, _, err = run(["fig2", "--out", str(tmp_path / "o"),
                            "--set", "dt_us=0.2"], capsys)
        assert code == 2
        assert "dt_us" in err


class TestRuns:
    def test_fid_writes_expected_files(self, tmp_path, capsys):
        out = tmp_path / "fid"
        code, stdout, _ = run(["fid", "--out", str(out),
                               "--set", "n_members=21", "--set", "fid_duration_us=20"],
                              capsys)
        assert code == 0
        names = {p.name for p in out.iterdir()}
        assert {"resolved_config.txt", "fid_timeseries.csv", "fid_report.txt"} <= names
        assert "fid_report.txt" in stdout

    def test_resolved_config_echoes_overrides(self, tmp_path, capsys):
        out = tmp_path / "pm"
        code, _, _ = run(["phase-match", "--out", str(out),
                          "--set", "theta_c_mrad=12.5"], capsys)
        assert code == 0
        echoed = (out / "resolved_config.txt").read_text()
        assert "theta_c_mrad = 12.5" in echoed
        assert echoed.startswith("scenario = phase-match")

    def test_svg_flag_adds_plots(self, tmp_path, capsys):
        out = tmp_path / "fid_svg"
        code, _, _ = run(["fid", "--out", str(out), "--svg",
                          "--set", "n_members=11", "--set", "fid_duration_us=15"],
                         capsys)
        assert code == 0
        assert (out / "fid_timeseries.svg").exists()

    def test_rerun_is_byte_identical(self, tmp_path, capsys):
        args = ["fig2", "--svg", "--set", "map_points=5", "--set", "map_span_khz=20",
                "--set", "dt_us=0.02", "--set", "tail_us=1"]
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert run(args + ["--out", str(out_a)], capsys)[0] == 0
        assert run(args + ["--out", str(out_b)], capsys)[0] == 0
        files_a = sorted(p.name for p in out_a.iterdir())
        files_b = sorted(p.name for p in out_b.iterdir())
        assert files_a == files_b
        for name in files_a:
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()

    def test_rerun_identical_across_processes(self, tmp_path):
        import subprocess
        import sys
        args = [sys.executable, "-m", "lsim.cli", "fid",
                "--set", "n_members=31", "--set", "fid_duration_us=20", "--svg"]
        for sub in ("a", "b"):
            proc = subprocess.run(args + ["--out", str(tmp_path / sub)],
                                  capture_output=True, text=True)
            assert proc.returncode == 0, proc.stderr
        names = sorted(p.name for p in (tmp_path / "a").iterdir())
        assert names == sorted(p.name for p in (tmp_path / "b").iterdir())
        for name in names:
            assert (tmp_path / "a" / name).read_bytes() == \
                   (tmp_path / "b" / name).read_bytes()

    def test_config_round_trip_reproduces_run(self, tmp_path, capsys):
        out_a = tmp_path / "a"
        code, _, _ = run(["fid", "--out", str(out_a),
                          "--set", "n_members=15", "--set", "fid_duration_us=18"],
                         capsys)
        assert code == 0
        out_b = tmp_path / "b"
        code, _, _ = run(["fid", "--out", str(out_b),
                          "--config", str(out_a / "resolved_config.txt")], capsys)
        assert code == 0
        for name in ("resolved_config.txt", "fid_timeseries.csv", "fid_report.txt"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()
