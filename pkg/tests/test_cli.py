"""End-to-end command-line behavior: outputs, summaries, exit codes."""
import math
import xml.etree.ElementTree as ET

import pytest

from znav.cli import main, parse_angle
from znav.export import read_csv

BENCH = ["--a", "0.75", "--wind", "rotation:0.7142857142857143",
         "--start", "0,pi/2"]


class TestParseAngle:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("pi", math.pi),
            ("pi/3", math.pi / 3),
            ("2pi/3", 2 * math.pi / 3),
            ("-pi/8", -math.pi / 8),
            ("0.5pi", math.pi / 2),
            ("1.0471975511965976", 1.0471975511965976),
        ],
    )
    def test_literals(self, text, expected):
        assert parse_angle(text) == pytest.approx(expected, rel=1e-15)

    def test_degrees_mode(self):
        assert parse_angle("60", degrees=True) == pytest.approx(math.pi / 3)
        # pi-literals stay exact radians regardless of the toggle
        assert parse_angle("pi/3", degrees=True) == pytest.approx(math.pi / 3)


class TestGeodesic:
    def test_benchmark_summary_and_csv(self, tmp_path, capsys):
        csv = tmp_path / "path.csv"
        code = main(["geodesic", *BENCH, "--heading", "pi/3", "--kind", "randers",
                     "--t-end", "3", "--csv", str(csv)])
        out = capsys.readouterr().out
        assert code == 0
        assert "termination=completed" in out
        assert "classification=circumpolar" in out
        cols = read_csv(str(csv))
        assert len(cols["t"]) == 301
        assert cols["phi_dot"][0] == pytest.approx(-3 / 14, abs=1e-15)

    def test_svg_kinds(self, tmp_path):
        for plot in ("path3d", "xy", "polar"):
            svg = tmp_path / f"{plot}.svg"
            code = main(["geodesic", *BENCH, "--heading", "pi/3", "--t-end", "1",
                         "--svg", str(svg), "--plot", plot])
            assert code == 0
            ET.parse(svg)  # well-formed document

    def test_segmented_figure(self, tmp_path):
        svg = tmp_path / "seg.svg"
        code = main(["geodesic", *BENCH, "--heading", "pi/3", "--t-end", "3",
                     "--svg", str(svg), "--segments", "1,2,3"])
        assert code == 0
        root = ET.parse(svg).getroot()
        polylines = root.findall(".//{http://www.w3.org/2000/svg}polyline")
        assert len(polylines) == 3

    def test_invalid_shape_rejected(self, capsys):
        code = main(["geodesic", "--a", "0", "--heading", "0"])
        assert code == 2
        assert "error[validation]" in capsys.readouterr().err

    def test_strong_wind_rejected(self, capsys):
        code = main(["geodesic", "--a", "0.75", "--wind", "rotation:1.0",
                     "--heading", "0"])
        assert code == 2

    def test_missing_heading(self):
        assert main(["geodesic", *BENCH]) == 2

    def test_io_failure(self, capsys):
        code = main(["geodesic", *BENCH, "--heading", "0", "--t-end", "1",
                     "--csv", "no/such/dir/out.csv"])
        assert code == 4
        assert "error[io]" in capsys.readouterr().err


class TestFamily:
    def test_fan_counts_and_outputs(self, tmp_path, capsys):
        csv = tmp_path / "fan.csv"
        svg = tmp_path / "fan.svg"
        code = main(["family", *BENCH, "--kind", "randers",
                     "--heading-start", "0", "--heading-step", "pi/4",
                     "--heading-count", "8", "--t-end", "2",
                     "--csv", str(csv), "--svg", str(svg)])
        out = capsys.readouterr().out
        assert code == 0
        assert "counts:" in out
        assert out.count("member=") == 8
        for i in range(8):
            assert (tmp_path / f"fan_{i:03d}.csv").exists()
        root = ET.parse(svg).getroot()
        assert len(root.findall(".//{http://www.w3.org/2000/svg}polyline")) == 8

    def test_long_fan_mixes_classes(self, capsys):
        code = main(["family", *BENCH, "--kind", "randers",
                     "--heading-start", "0", "--heading-step", "pi/4",
                     "--heading-count", "8", "--t-end", "50"])
        out = capsys.readouterr().out
        assert code == 0
        assert "classification=transpolar" in out
        assert "classification=circumpolar" in out

    def test_empty_fan_rejected(self):
        code = main(["family", *BENCH, "--heading-start", "0",
                     "--heading-step", "pi/4", "--heading-count", "0"])
        assert code == 2


class TestCompare:
    def test_wind_drag_residual(self, tmp_path, capsys):
        csv = tmp_path / "diff.csv"
        code = main(["compare", *BENCH, "--heading", "pi/3", "--t-end", "2",
                     "--csv", str(csv), "--svg", str(tmp_path / "overlay.svg")])
        out = capsys.readouterr().out
        assert code == 0
        killing = [ln for ln in out.splitlines() if "killing_residual_phi" in ln]
        assert killing
        assert float(killing[0].split("killing_residual_phi=")[1].split()[0]) < 1e-6
        cols = read_csv(str(csv))
        assert max(abs(v) for v in cols["d_theta"]) < 1e-6
        # azimuthal rate translates by exactly -c
        assert max(abs(v + 5 / 7) for v in cols["d_phi_dot"]) < 1e-6
        root = ET.parse(tmp_path / "overlay.svg").getroot()
        assert len(root.findall(".//{http://www.w3.org/2000/svg}polyline")) == 3

    def test_still_air_flows_coincide(self, capsys):
        code = main(["compare", "--a", "0.75", "--wind", "none",
                     "--start", "0,pi/2", "--heading", "pi/3", "--t-end", "2"])
        out = capsys.readouterr().out
        assert code == 0
        max_dphi = float(out.split("max_dphi=")[1].split()[0])
        assert max_dphi < 1e-8


class TestIndicatrix:
    def test_residual_and_curves(self, tmp_path, capsys):
        csv = tmp_path / "ind.csv"
        svg = tmp_path / "ind.svg"
        code = main(["indicatrix", *BENCH, "--n", "360",
                     "--csv", str(csv), "--svg", str(svg)])
        out = capsys.readouterr().out
        assert code == 0
        residual = float(out.split("indicatrix_residual=")[1].split()[0])
        assert residual < 1e-9
        root = ET.parse(svg).getroot()
        assert len(root.findall(".//{http://www.w3.org/2000/svg}polyline")) == 4
        with open(csv) as fh:
            assert len(fh.read().strip().split("\n")) == 1 + 4 * 360

    def test_too_few_samples(self):
        assert main(["indicatrix", *BENCH, "--n", "2"]) == 2


class TestReport:
    def test_benchmark_block(self, capsys):
        code = main(["report", *BENCH, "--heading", "pi/3", "--t-end", "1"])
        out = capsys.readouterr().out
        assert code == 0
        assert "heading_0 = 60 deg" in out
        assert "course_0 = 103.9 deg" in out
        assert "drift_0 = -43.9 deg" in out
        assert "speed_0 = 0.8921" in out

    def test_reversed_block(self, capsys):
        code = main(["report", *BENCH, "--heading", "2pi/3", "--t-end", "1"])
        out = capsys.readouterr().out
        assert code == 0
        assert "course_0 = 144.5 deg" in out
        assert "drift_0 = -24.5 deg" in out
        assert "speed_0 = 1.491" in out

    def test_compass_conversion(self, capsys):
        code = main(["report", *BENCH, "--heading", "pi/3", "--t-end", "1",
                     "--compass"])
        out = capsys.readouterr().out
        assert code == 0
        # 60 deg counterclockwise from the parallel is azimuth 030
        assert "heading_0 = 30 deg (compass azimuth)" in out

    def test_figure_outputs(self, tmp_path):
        code = main(["report", *BENCH, "--heading", "pi/3", "--t-end", "2",
                     "--svg", str(tmp_path / "channel.svg"),
                     "--speed-svg", str(tmp_path / "speed.svg")])
        assert code == 0
        assert (tmp_path / "channel.svg").exists()
        assert (tmp_path / "speed.svg").exists()


class TestConfigFile:
    def test_file_plus_override(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "# benchmark setup\n"
            "a = 0.75\n"
            "wind = rotation:0.7142857142857143\n"
            "start = 0,pi/2\n"
            "heading = pi/3\n"
            "kind = randers\n"
            "t_end = 1\n"
        )
        code = main(["report", "--config", str(cfg), "--heading", "2pi/3"])
        out = capsys.readouterr().out
        assert code == 0
        assert "course_0 = 144.5 deg" in out  # override took effect

    def test_unknown_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("a = 0.75\nwarp_factor = 9\n")
        code = main(["report", "--config", str(cfg), "--heading", "0"])
        assert code == 2
        assert "unknown key" in capsys.readouterr().err

    def test_missing_file(self):
        assert main(["report", "--config", "nope.cfg", "--heading", "0"]) == 2
