import csv
import io
import subprocess
import sys

import pytest

from varweyl import funcspace as fs
from varweyl.cli import ConfigError, evaluate_expression, function_of_t, main, parse_config, SPEC_NAMES


def run(argv, tmp_path=None, config=None):
    if config is not None:
        path = tmp_path / "run.ini"
        path.write_text(config)
        argv = [*argv, "--config", str(path)]
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


class TestConfig:
    def test_defaults(self):
        cfg = parse_config("", "norm")
        assert cfg.get("class", "p").p_plus == 1.0
        assert cfg.get("grid", "interval") == (0.0, 1.0)

    def test_values_are_built(self):
        cfg = parse_config("[data]\nf = Scale(2, Heaviside())\n[class]\np = 2\nF = PowerOfL(-1)\n", "seminorm")
        f = cfg.get("data", "f")
        assert isinstance(f, fs.FunctionSpec)
        assert f.values([1.0])[0, 0] == 2.0

    @pytest.mark.parametrize("text,line,needle", [
        ("[class]\np = 0.5\n", 2, "exponent below 1"),
        ("[data]\nf = Foo(1)\n", 2, "unknown name 'Foo'"),
        ("[grid]\ntau = 1\nwidth = 3\n", 3, "width"),
        ("[colour]\nx = 1\n", 1, "colour"),
        ("[grid]\ntau = 1\ntau = 2\n", 3, "tau"),
    ])
    def test_errors_carry_line_numbers(self, text, line, needle):
        with pytest.raises(ConfigError) as info:
            parse_config(text, "seminorm")
        assert needle in str(info.value)
        assert info.value.line == line

    def test_keys_are_case_sensitive(self):
        cfg = parse_config("[class]\nF1 = PowerOfL(-1)\n", "check")
        assert cfg.get("class", "F1")(4.0, 0.0) == pytest.approx(0.25)

    def test_expression_rejects_attribute_access(self):
        with pytest.raises(ValueError):
            evaluate_expression("Heaviside().__class__", SPEC_NAMES)
        with pytest.raises(ValueError):
            evaluate_expression("__import__('os')", SPEC_NAMES)

    def test_function_of_t(self):
        fn = function_of_t("exp(-t) * t**2")
        assert fn(1.0) == pytest.approx(0.36787944117144233)


class TestCommands:
    def test_norm(self, tmp_path):
        code, text = run(["norm"], tmp_path, "[data]\nf = Indicator(0, 0.5)\n[class]\np = 2\n")
        assert code == 0
        assert "0.707106781187" in text

    def test_seminorm_csv(self, tmp_path):
        out = tmp_path / "curve.csv"
        code, text = run(["seminorm", "--out", str(out)], tmp_path,
                         "[data]\nf = Heaviside()\n[grid]\ntau = 2\nl = 5\n")
        assert code == 0
        rows = list(csv.DictReader(out.open()))
        assert max(float(r["value"]) for r in rows) == pytest.approx(2.0)

    def test_membership_violation_exit_code(self, tmp_path):
        code, _ = run(["membership"], tmp_path,
                      "[data]\nf = Indicator(0, 0.5)\n[class]\neps = 0.2\nF = PsiPower(0, 1)\n"
                      "[grid]\nscan_start = 10\n")
        assert code == 1

    def test_frac_caputo(self):
        code, text = run(["frac", "caputo", "--zeta", "0.5", "--fn", "t", "--t", "1.0"])
        assert code == 0
        assert "1.1283791671" in text

    def test_frac_zeta_out_of_range(self):
        assert run(["frac", "caputo", "--zeta", "1.5"])[0] == 2

    def test_convolve_is_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(["convolve", "--out", str(a)])[0] == 0
        assert run(["convolve", "--out", str(b)])[0] == 0
        assert a.read_bytes() == b.read_bytes()
        rows = list(csv.DictReader(a.open()))
        assert len(rows) == 21

    def test_check_reports_violation(self):
        assert run(["check", "jensen"])[0] == 1

    def test_unknown_subcommand(self):
        assert run(["wobble"])[0] == 2

    def test_missing_config_file(self, tmp_path):
        assert run(["norm", "--config", str(tmp_path / "nope.ini")])[0] == 2

    def test_export_defaults(self):
        code, text = run(["export", "defaults"])
        assert code == 0
        assert text.startswith("section,key,kind,default,description")

    def test_export_suite_matches_stored_table(self):
        code, text = run(["export", "suite"])
        rows = list(csv.DictReader(io.StringIO(text)))
        assert code == 0 and len(rows) == 30

    def test_suite_selection_spaces(self, tmp_path):
        out = tmp_path / "spaces.csv"
        code, text = run(["paper-suite", "spaces", "--out", str(out)])
        assert code == 0, text
        assert "0 mismatches" in text

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "varweyl", "norm"], capture_output=True, text=True)
        assert proc.returncode == 0
        assert "norm on [0, 1]" in proc.stdout
