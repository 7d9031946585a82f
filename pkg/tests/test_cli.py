import csv
import io
import json
import time

import numpy as np
import pytest

from nessxy import flux
from nessxy.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    rows = list(csv.reader(io.StringIO("\n".join(body))))
    return rows[0], np.array(rows[1:], dtype=float)


def test_flux_equal_temperatures(capsys):
    code, out, _ = run(capsys, "flux", "--gamma", 1, "--beta-l", 1.5, "--beta-r", 1.5)
    rec = json.loads(out)
    assert code == 0
    assert abs(rec["J"]) <= 1e-10 and rec["lower_bound"] is None


def test_flux_within_bounds(capsys):
    code, out, _ = run(capsys, "flux", "--gamma", 1, "--beta-l", 1, "--beta-r", 2)
    rec = json.loads(out)
    assert code == 0
    assert rec["lower_bound"] <= rec["J"] <= 0.5
    assert rec["J"] == flux.heat_flux(1.0, 1.0, 2.0).J
    assert rec["manifest"]["subcommand"] == "flux"


def test_flux_even_in_gamma_bitwise(capsys):
    _, plus, _ = run(capsys, "flux", "--gamma", 2, "--beta-l", 1, "--beta-r", 2)
    _, minus, _ = run(capsys, "flux", "--gamma", -2, "--beta-l", 1, "--beta-r", 2)
    assert json.loads(plus)["J"] == json.loads(minus)["J"]


def test_flux_usage_errors(capsys):
    assert run(capsys, "flux", "--gamma", 1, "--beta-l", 1)[0] == 2
    assert run(capsys, "flux", "--gamma", 1, "--beta-l", -1, "--beta-r", 2)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["flux", "--gamma", "abc"])
    assert exc.value.code == 2


def test_sweep_is_palindromic(capsys, tmp_path):
    out = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep", "--beta-l", 1, "--beta-r", 2, "--steps", 41, "-o", out)
    assert code == 0
    text = out.read_text()
    assert text.startswith("# manifest: ")
    cols, data = read_csv(text)
    assert cols == ["gamma", "J", "sigma", "lower_bound", "quad_error"]
    assert data.shape == (41, 5)
    np.testing.assert_array_equal(data[:, 0], -data[::-1, 0])
    np.testing.assert_array_equal(data[:, 1], data[::-1, 1])
    assert np.all((data[:, 1] > 0) & (data[:, 1] <= 0.5))
    assert np.argmax(data[:, 1]) == 20 and data[20, 0] == 0


def test_sweep_rejects_bad_grid(capsys):
    assert run(capsys, "sweep", "--beta-l", 1, "--beta-r", 2, "--steps", 1)[0] == 2


def test_oracle_guard_and_usage(capsys):
    code, out, err = run(capsys, "oracle", "--lattice", 100, "--t-max", 99)
    assert code == 4 and out == "" and "trunc" in err
    assert run(capsys, "oracle", "--lattice", 100, "--t-max", 50, "--a", 5)[0] == 2


def test_oracle_small_run_report(capsys):
    code, out, _ = run(capsys, "oracle", "--lattice", 150, "--t-max", 50, "--accept", 0.05)
    rec = json.loads(out)
    assert code == 0
    assert set(rec) >= {"config", "J_num", "J_closed", "abs_diff", "first_law_residual",
                        "bound_state_count", "diagnostics", "manifest"}
    assert rec["abs_diff"] == abs(rec["J_num"] - rec["J_closed"])
    assert rec["J_num"] > 0 > rec["diagnostics"]["J_right"]
    assert rec["bound_state_count"] == 2
    # a strict acceptance threshold turns the same run into a failed check
    assert run(capsys, "oracle", "--lattice", 150, "--t-max", 50, "--accept", 1e-12)[0] == 1


@pytest.mark.slow
def test_oracle_reference_default(capsys):
    code, out, _ = run(capsys, "oracle", "--beta-l", 1, "--beta-r", 2)
    rec = json.loads(out)
    assert code == 0 and rec["abs_diff"] < 1e-2


def test_wave_plane_wave_at_gamma_zero(capsys):
    code, out, _ = run(capsys, "wave", "--gamma", 0, "--x", -3, "--a", 0, "--grid", 64)
    assert code == 0
    assert "omitted exceptional points" in out
    cols, data = read_csv(out)
    assert cols == ["k", "re_w1", "im_w1", "re_w2", "im_w2"]
    k = data[:, 0]
    assert 0 < len(k) < 64 and not np.any(k == 0)
    np.testing.assert_allclose(data[:, 1] + 1j * data[:, 2], np.exp(-3j * k), atol=1e-14)
    np.testing.assert_array_equal(data[:, 3:], 0)


def test_wave_requires_arguments(capsys):
    assert run(capsys, "wave", "--gamma", 1, "--x", 0)[0] == 2


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"gamma": 1.0, "beta_l": 1, "beta-r": "2"}))
    code, out, _ = run(capsys, "flux", "--config", cfg)
    assert code == 0 and json.loads(out)["J"] == flux.heat_flux(1.0, 1.0, 2.0).J
    code, out, _ = run(capsys, "flux", "--config", cfg, "--gamma", 0)
    assert json.loads(out)["J"] == flux.heat_flux(0.0, 1.0, 2.0).J
    cfg.write_text(json.dumps({"temperature": 3}))
    assert run(capsys, "flux", "--config", cfg)[0] == 2
    assert run(capsys, "flux", "--config", tmp_path / "missing.json")[0] == 2


def test_reruns_are_bit_identical(capsys):
    argv = ("sweep", "--beta-l", 0.5, "--beta-r", 3, "--steps", 9)
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]
    argv = ("wave", "--gamma", 1.3, "--x", 2, "--a", 0, "--grid", 32)
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_verify_fast(capsys):
    start = time.perf_counter()
    code, out, _ = run(capsys, "verify", "--fast")
    assert time.perf_counter() - start < 60
    assert code == 0
    lines = out.strip().splitlines()
    assert all(line.startswith("PASS") for line in lines[:-1])
    assert lines[-1].endswith("checks passed")
