"""Command line behavior: parsing, precedence, determinism, exit codes."""

import io

import pytest

from gausdisk.cli import main
from gausdisk.hermite import rule_from_csv
from gausdisk.measures import DiscreteMeasure


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestRule:
    def test_k_to_stdout(self, capsys):
        code, out, err = run_cli(capsys, "rule", "--k", "3", "--precision", "128")
        assert code == 0 and err == ""
        rule = rule_from_csv(io.StringIO(out))
        assert rule.k == 3 and rule.bits == 128

    def test_a_picks_size(self, capsys):
        code, out, _ = run_cli(capsys, "rule", "--a", "6", "--precision", "96")
        assert code == 0
        assert rule_from_csv(io.StringIO(out)).k == 5

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "rule.csv"
        code, out, _ = run_cli(
            capsys, "rule", "--k", "2", "--precision", "64", "--out", str(target)
        )
        assert code == 0 and out == ""
        assert rule_from_csv(io.StringIO(target.read_text())).k == 2

    def test_requires_exactly_one_selector(self, capsys):
        code, _, err = run_cli(capsys, "rule")
        assert code == 2 and "exactly one" in err
        code, _, err = run_cli(capsys, "rule", "--k", "2", "--a", "5")
        assert code == 2


class TestTransform:
    def test_error_at_real_point(self, capsys):
        code, out, _ = run_cli(
            capsys, "transform", "--measure", "trunc:6", "--z", "0.5"
        )
        assert code == 0
        fields = out.split()
        assert fields[0] == "z" and fields[3] == "error"
        assert float(fields[4]) == pytest.approx(-1.93276e-8, rel=1e-4)
        assert float(fields[5]) == 0.0

    def test_complex_point_forms(self, capsys):
        code1, out1, _ = run_cli(capsys, "transform", "--z", "1,2", "--what", "laplace")
        code2, out2, _ = run_cli(capsys, "transform", "--z", "1 2", "--what", "laplace")
        assert code1 == code2 == 0
        assert out1 == out2

    def test_char_of_two_point_rule(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "transform",
            "--measure",
            "rule:2",
            "--t",
            "0.8",
            "--what",
            "char",
            "--precision",
            "128",
        )
        assert code == 0
        fields = out.split()
        assert fields[0] == "t"
        import math

        assert float(fields[4]) == pytest.approx(math.cos(0.8), rel=1e-12)

    def test_multiple_points_one_line_each(self, capsys):
        code, out, _ = run_cli(
            capsys, "transform", "--z", "0.5", "--z", "1", "--t", "2"
        )
        assert code == 0
        assert len(out.strip().split("\n")) == 3

    def test_full_precision_prints_tags(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "transform",
            "--z",
            "0.5",
            "--what",
            "laplace",
            "--precision",
            "96",
            "--full-precision",
        )
        assert code == 0
        assert "@96" in out

    def test_needs_a_point(self, capsys):
        code, _, err = run_cli(capsys, "transform")
        assert code == 2 and "at least one" in err

    def test_unknown_measure(self, capsys):
        code, _, err = run_cli(capsys, "transform", "--measure", "nope:1", "--z", "1")
        assert code == 2 and "measure spec" in err

    def test_csv_measure_roundtrip(self, capsys, tmp_path):
        rule_path = tmp_path / "r.csv"
        run_cli(capsys, "rule", "--k", "4", "--precision", "128", "--out", str(rule_path))
        code, out_csv, _ = run_cli(
            capsys, "transform", "--measure", f"csv:{rule_path}", "--z", "1",
            "--what", "laplace",
        )
        code2, out_direct, _ = run_cli(
            capsys, "transform", "--measure", "rule:4", "--precision", "128",
            "--z", "1", "--what", "laplace",
        )
        assert code == code2 == 0
        assert out_csv == out_direct

    def test_missing_csv_is_io_error(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "transform", "--measure", f"csv:{tmp_path}/nope.csv", "--z", "1"
        )
        assert code == 4 and "i/o error" in err


class TestSupdisk:
    def test_circle_known_value(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "supdisk",
            "--measure",
            "rulefor:4",
            "--r",
            "1",
            "--samples",
            "64",
        )
        assert code == 0
        values = dict(
            line.split(" ", 1) for line in out.strip().split("\n")
        )
        assert values["arc"] == "quarter"
        assert float(values["sup_lower_bound"]) == pytest.approx(
            1.0564063588e-1, rel=1e-9
        )

    def test_line_scan_fields(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "supdisk",
            "--measure",
            "rule:2",
            "--r",
            "0",
            "--line",
            "--samples",
            "64",
            "--precision",
            "128",
        )
        assert code == 0
        values = dict(line.split(" ", 1) for line in out.strip().split("\n"))
        assert values["certified"] == "True"
        assert float(values["sup_lower_bound"]) == pytest.approx(1.00746490, rel=1e-8)

    def test_zero_circle_radius_rejected(self, capsys):
        code, _, err = run_cli(capsys, "supdisk", "--r", "0")
        assert code == 2


class TestFigure:
    def test_small_grid_with_artifacts(self, capsys, tmp_path):
        csv_path = tmp_path / "fig.csv"
        svg_path = tmp_path / "fig.svg"
        manifest_path = tmp_path / "fig.json"
        code, out, _ = run_cli(
            capsys,
            "figure",
            "--grid",
            "4,5,6,7",
            "--samples",
            "32",
            "--csv",
            str(csv_path),
            "--svg",
            str(svg_path),
            "--manifest",
            str(manifest_path),
        )
        assert code == 0
        assert out.count("\n") >= 4
        assert "fit_trunc slope" in out
        assert "fit_c1" in out
        assert "tail_chain a 4.0" in out
        first = {p.read_bytes() for p in (csv_path, svg_path, manifest_path)}
        code2, out2, _ = run_cli(
            capsys,
            "figure",
            "--grid",
            "4,5,6,7",
            "--samples",
            "32",
            "--csv",
            str(csv_path),
            "--svg",
            str(svg_path),
            "--manifest",
            str(manifest_path),
        )
        assert code2 == 0 and out2 == out
        assert {p.read_bytes() for p in (csv_path, svg_path, manifest_path)} == first

    def test_range_grid_parsing(self, capsys):
        code, out, _ = run_cli(
            capsys, "figure", "--grid", "4:5:0.5", "--samples", "16"
        )
        assert code == 0
        assert out.startswith("a 4.0 ")
        assert "a 4.5 " in out and "a 5.0 " in out

    def test_bad_grid(self, capsys):
        code, _, err = run_cli(capsys, "figure", "--grid", "5:4:1", "--samples", "16")
        assert code == 2

    def test_explicit_precision_overrides_policy(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "figure",
            "--grid",
            "4",
            "--samples",
            "16",
            "--precision",
            "256",
        )
        assert code == 0
        assert "bits 256" in out


class TestSuperflat:
    def test_csv_with_certificate(self, capsys):
        code, out, _ = run_cli(
            capsys, "superflat", "--a", "4", "--certify", "--samples", "64"
        )
        assert code == 0
        assert "# a=4" in out
        assert "# certificate_passed True" in out
        assert "# boundary_deviation 4.07493" in out
        assert "# derivative 8 cauchy_bound" in out

    def test_width_validated(self, capsys):
        code, _, err = run_cli(capsys, "superflat", "--a", "3")
        assert code == 2


class TestVerify:
    def test_quick_passes(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--quick")
        assert code == 0
        lines = out.strip().split("\n")
        assert all(line.startswith("PASS ") for line in lines)
        assert len(lines) == 14


class TestPrecedence:
    def test_env_var_applies(self, capsys, monkeypatch):
        monkeypatch.setenv("GAUSDISK_PRECISION", "96")
        _, out, _ = run_cli(capsys, "rule", "--k", "2")
        assert "@96" in out

    def test_flag_beats_env(self, capsys, monkeypatch):
        monkeypatch.setenv("GAUSDISK_PRECISION", "96")
        _, out, _ = run_cli(capsys, "rule", "--k", "2", "--precision", "128")
        assert "@128" in out and "@96" not in out

    def test_env_auto_falls_through(self, capsys, monkeypatch):
        monkeypatch.setenv("GAUSDISK_PRECISION", "auto")
        code, out, _ = run_cli(capsys, "rule", "--k", "2")
        assert code == 0

    def test_bad_env_rejected(self, capsys, monkeypatch):
        monkeypatch.setenv("GAUSDISK_PRECISION", "not-bits")
        code, _, err = run_cli(capsys, "rule", "--k", "2")
        assert code == 2 and "GAUSDISK_PRECISION" in err

    def test_config_supplies_defaults(self, capsys, tmp_path):
        conf = tmp_path / "conf.txt"
        conf.write_text("# comment\nprecision = 128\n")
        _, out, _ = run_cli(capsys, "rule", "--k", "2", "--config", str(conf))
        assert "@128" in out

    def test_cli_pins_beat_config(self, capsys, tmp_path):
        conf = tmp_path / "conf.txt"
        conf.write_text("precision=128\n")
        _, out, _ = run_cli(
            capsys, "rule", "--k", "2", "--config", str(conf), "--precision", "96"
        )
        assert "@96" in out

    def test_unknown_config_key(self, capsys, tmp_path):
        conf = tmp_path / "conf.txt"
        conf.write_text("wibble=3\n")
        code, _, err = run_cli(capsys, "rule", "--k", "2", "--config", str(conf))
        assert code == 2 and "unknown config key" in err

    def test_malformed_config_line(self, capsys, tmp_path):
        conf = tmp_path / "conf.txt"
        conf.write_text("just words\n")
        code, _, err = run_cli(capsys, "rule", "--k", "2", "--config", str(conf))
        assert code == 2 and "key=value" in err

    def test_low_precision_rejected(self, capsys):
        code, _, err = run_cli(capsys, "rule", "--k", "2", "--precision", "32")
        assert code == 2 and "at least 64" in err


class TestExitCodes:
    def test_unknown_subcommand(self, capsys):
        assert run_cli(capsys, "frobnicate")[0] == 2

    def test_no_subcommand(self, capsys):
        assert run_cli(capsys, )[0] == 2

    def test_unwritable_out(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys,
            "rule",
            "--k",
            "2",
            "--out",
            str(tmp_path / "missing_dir" / "x.csv"),
        )
        assert code == 4

    def test_version(self, capsys):
        code, out, _ = run_cli(capsys, "--version")
        assert code == 0 and out.startswith("gausdisk ")
