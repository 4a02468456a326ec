import numpy as np
import pytest

from lsim.config import SCENARIO_NAMES, ScenarioConfig, load_config
from lsim.core import SpectralMap, TimeSeries
from lsim.errors import ConfigError, RenderError
from lsim.output import TIMESERIES_HEADER, render_svg, write_csv


def tiny_series(n=3):
    t = np.arange(n, dtype=float)
    channels = {
        "re_rho12": np.linspace(0.0, 1.0, n),
        "im_rho12": np.zeros(n),
        "re_rho13": np.full(n, 0.25),
        "im_rho13": -np.linspace(0.0, 0.5, n),
        "pop1": np.full(n, 0.5),
        "pop2": np.full(n, 0.5),
        "pop3": np.zeros(n),
        "e_d_arb": np.linspace(0.0, 0.5, n),
    }
    return TimeSeries(t, channels)


class TestLoadConfig:
    def test_documented_defaults(self):
        cfg = load_config("fig2")
        assert cfg["delta_s_khz"] == 30.0
        assert cfg["coupling_rabi_khz"] == 100.0
        assert cfg["dt_us"] == 0.01

    def test_scenario_overlay(self):
        assert load_config("fig3")["readout_len_us"] == 20.0
        assert load_config("fig2")["readout_len_us"] == 10.0

    def test_cli_override_wins(self):
        cfg = load_config("slowlight", overrides=["probe_len_us=8"])
        assert cfg["probe_len_us"] == 8.0

    def test_file_then_override_precedence(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("# comment line\nprobe_rabi_khz = 33\n", encoding="utf-8")
        cfg = load_config("fig2", path=path, overrides=["probe_rabi_khz=44"])
        assert cfg["probe_rabi_khz"] == 44.0

    def test_unknown_key_rejected_with_line(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("gamma12_khz = 0\nbogus_key = 1\n", encoding="utf-8")
        with pytest.raises(ConfigError, match=r"bad\.cfg:2.*bogus_key"):
            load_config("fig2", path=path)

    def test_missing_unit_suffix_hint(self):
        with pytest.raises(ConfigError, match="probe_len_us"):
            load_config("slowlight", overrides=["probe_len=8"])

    def test_unparseable_value(self):
        with pytest.raises(ConfigError, match="dt_us"):
            load_config("fig2", overrides=["dt_us=fast"])

    def test_bad_enum_value(self):
        with pytest.raises(ConfigError, match="edge_shape"):
            load_config("fig2", overrides=["edge_shape=triangular"])

    def test_unknown_scenario(self):
        with pytest.raises(ConfigError, match="valid"):
            load_config("fig9000")

    def test_round_trip_through_resolved_text(self, tmp_path):
        cfg = load_config("fig3", overrides=["readout_rabi_khz=77.5", "sweep_count=3"])
        echo = tmp_path / "resolved_config.txt"
        echo.write_text(cfg.resolved_text(), encoding="utf-8")
        again = load_config("fig3", path=echo)
        assert again.values == cfg.values

    def test_all_scenarios_have_defaults(self):
        for name in SCENARIO_NAMES:
            assert isinstance(load_config(name), ScenarioConfig)


class TestWriteCsv:
    def test_series_line_count_and_header(self, tmp_path):
        path = write_csv(tiny_series(3), tmp_path / "s.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == TIMESERIES_HEADER
        assert lines[0] == "t_us,re_rho12,im_rho12,re_rho13,im_rho13,pop1,pop2,pop3,e_d_arb"
        assert len(lines) == 4

    def test_full_precision_round_trip(self, tmp_path):
        t = np.array([0.0, 0.1])
        value = 0.1234567890123456789
        channels = {name: np.array([value, -value]) for name in
                    ("re_rho12", "im_rho12", "re_rho13", "im_rho13",
                     "pop1", "pop2", "pop3", "e_d_arb")}
        path = write_csv(TimeSeries(t, channels), tmp_path / "p.csv")
        row = path.read_text().splitlines()[1].split(",")
        assert float(row[1]) == value

    def test_byte_identical_for_identical_input(self, tmp_path):
        a = write_csv(tiny_series(), tmp_path / "a.csv").read_bytes()
        b = write_csv(tiny_series(), tmp_path / "b.csv").read_bytes()
        assert a == b

    def test_map_long_format(self, tmp_path):
        sm = SpectralMap(np.array([-1.0, 1.0]), np.array([0.0, 0.5]),
                         np.array([[1.0, 2.0], [3.0, 4.0]]))
        path = write_csv(sm, tmp_path / "m.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == "delta2_khz,t_us,value"
        assert len(lines) == 5
        assert lines[1] == "-1.0,0.0,1.0"
        assert lines[4] == "1.0,0.5,4.0"

    def test_newline_discipline(self, tmp_path):
        raw = write_csv(tiny_series(), tmp_path / "n.csv").read_bytes()
        assert b"\r" not in raw
        assert raw.endswith(b"\n")


class TestRenderSvg:
    def test_polyline_per_requested_channel(self, tmp_path):
        path = render_svg(tiny_series(2), tmp_path / "s.svg",
                          {"channels": ["re_rho12", "im_rho13"]})
        text = path.read_text()
        assert text.count("<polyline") == 2
        assert "re_rho12" in text and "im_rho13" in text

    def test_byte_identical_for_identical_input(self, tmp_path):
        a = render_svg(tiny_series(), tmp_path / "a.svg").read_bytes()
        b = render_svg(tiny_series(), tmp_path / "b.svg").read_bytes()
        assert a == b

    def test_map_heatmap(self, tmp_path):
        sm = SpectralMap(np.linspace(-5, 5, 11), np.linspace(0, 1, 7),
                         np.outer(np.linspace(-1, 1, 11), np.ones(7)))
        text = render_svg(sm, tmp_path / "m.svg").read_text()
        assert text.count("<rect") > 50
        assert "two-photon detuning" in text

    def test_empty_channel_list_rejected(self, tmp_path):
        with pytest.raises(RenderError):
            render_svg(tiny_series(), tmp_path / "e.svg", {"channels": []})
