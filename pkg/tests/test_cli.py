import json
import math

import numpy as np
import pytest

from idjcm.cli import format_csv, parse_config, run
from idjcm.errors import ConfigurationError


def test_trace_csv(tmp_path):
    out = tmp_path / "trace.csv"
    code = run(["trace", "--alpha", "1", "--t-max", "6.2832", "--t-steps", "257", "--format", "csv", "--out", str(out)])
    assert code == 0
    text = out.read_text()
    lines = text.split("\n")
    assert lines[0] == "alpha,T,I_F,S_W,var_x2"
    assert text.endswith("\n")
    assert len(lines) - 2 == 257
    # 17 significant digits round-trip
    row = [float(v) for v in lines[2].split(",")]
    assert row[1] == np.linspace(0, 6.2832, 257)[1]
    meta = json.loads((tmp_path / "trace.csv.meta.json").read_text())
    assert meta["kind"] == "trace" and meta["grid"]["n_r"] == 200
    assert "wall_time_s" in meta and meta["version"]


def test_json_format(tmp_path):
    out = tmp_path / "cr.json"
    assert run(["cr", "--alpha", "1", "--t-steps", "3", "--format", "json", "--out", str(out)]) == 0
    obj = json.loads(out.read_text())
    assert set(obj) == {"meta", "rows"}
    assert obj["meta"]["columns"] == ["alpha", "T", "cr_product", "marginal_cr_x1", "marginal_cr_x2"]
    assert len(obj["rows"]) == 3 and len(obj["rows"][0]) == 5


def test_surface_row_count(tmp_path):
    out = tmp_path / "surface.csv"
    code = run(["surface", "--alpha-min", "0.5", "--alpha-max", "3.5", "--alpha-steps", "31",
                "--t-steps", "129", "--grid-radial", "48", "--grid-angular", "96", "--out", str(out)])
    assert code == 0
    assert len(out.read_text().splitlines()) - 1 == 3999


def test_alpha_sweep_cli(tmp_path):
    out = tmp_path / "sweep.csv"
    assert run(["alpha-sweep", "--alpha", "1,2", "--t-steps", "9", "--out", str(out)]) == 0
    assert out.read_text().splitlines()[0] == "alpha,I_F_mean,S_W_mean"


def test_parametric_stdout(capsys):
    assert run(["parametric", "--alpha", "1", "--t-steps", "2"]) == 0
    assert capsys.readouterr().out.startswith("alpha,T,S_W,I_F\n")


def test_validate(tmp_path, capsys):
    out = tmp_path / "v.json"
    assert run(["validate", "--alpha", "1,2,3", "--format", "json", "--out", str(out)]) == 0
    obj = json.loads(out.read_text())
    assert all(row[-1] for row in obj["rows"])
    assert "FAIL" not in capsys.readouterr().err


def test_validate_failure_exit_code(tmp_path, monkeypatch):
    import idjcm.validation as v

    monkeypatch.setattr(v, "run_validation", lambda base, spec: (v.COLUMNS, [("x", 1.0, 1.0, 0.0, False)], False))
    assert run(["validate", "--alpha", "1", "--out", str(tmp_path / "v.csv")]) == 1


@pytest.mark.parametrize("argv", [
    ["trace", "--bogus"],
    ["nosuch"],
    [],
    ["trace", "--alpha", "1,x"],
    ["trace", "--alpha", "1", "--alpha-min", "0"],
    ["trace", "--t-steps", "1"],
    ["trace", "--grid-radial", "4"],
    ["trace", "--alpha", "-1"],
    ["trace", "--t-min", "2", "--t-max", "1"],
])
def test_configuration_errors(argv, capsys):
    assert run(argv) == 2
    err = capsys.readouterr().err
    assert err.count("\n") == 1 and err.startswith("idjcm: configuration error")


def test_unwritable_output(tmp_path):
    assert run(["trace", "--alpha", "1", "--t-steps", "2", "--out", str(tmp_path / "missing" / "x.csv")]) == 2


def test_numerical_error_exit_code(tmp_path, capsys):
    # explicit truncation far too small for alpha=4 leaves the Husimi unnormalised
    code = run(["trace", "--alpha", "4", "--n-max", "3", "--t-steps", "2", "--out", str(tmp_path / "x.csv")])
    assert code == 3
    assert "numerical error" in capsys.readouterr().err


class TestConfigFile:
    def test_empty(self, tmp_path):
        p = tmp_path / "c.cfg"
        p.write_text("")
        assert parse_config(str(p)) == {}

    def test_grid_override_echoed(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("# grid\nn_r = 64\nn_theta = 64\nalpha = 1\nt_steps = 2\n")
        out = tmp_path / "o.csv"
        assert run(["trace", "--config", str(cfg), "--out", str(out)]) == 0
        meta = json.loads((tmp_path / "o.csv.meta.json").read_text())
        assert meta["grid"] == {"n_r": 64, "n_theta": 64}
        assert meta["file_values"]["n_r"] == 64

    def test_flags_override_file(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("n_r = 64\nalpha = 1\nt_steps = 2\n")
        out = tmp_path / "o.csv"
        assert run(["trace", "--config", str(cfg), "--grid-radial", "48", "--out", str(out)]) == 0
        assert json.loads((tmp_path / "o.csv.meta.json").read_text())["grid"]["n_r"] == 48

    def test_negative_alpha(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("alpha_mag = -1\n")
        assert run(["trace", "--config", str(cfg)]) == 2

    def test_unknown_key(self, tmp_path, capsys):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("colour = blue\n")
        assert run(["trace", "--config", str(cfg)]) == 2
        assert "colour" in capsys.readouterr().err

    def test_type_mismatch(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("n_r = many\n")
        with pytest.raises(ConfigurationError):
            parse_config(str(cfg))
        assert run(["trace", "--config", str(cfg)]) == 2

    def test_missing_file(self):
        assert run(["trace", "--config", "/nonexistent/cfg"]) == 2


def test_csv_formatting():
    text = format_csv(["a", "b"], [(0.1, 1 / 3)])
    assert text == "a,b\n0.10000000000000001,0.33333333333333331\n"
    assert float(text.split("\n")[1].split(",")[1]) == 1 / 3
