import json

import numpy as np
import pytest

from dhzeros import cli, zeros
from dhzeros.errors import MirrorNotFound


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def records(out):
    return [json.loads(line) for line in out.splitlines() if line.strip()]


def test_show_config(capsys):
    code, out, _ = run(capsys, "--show-config")
    (cfg,) = records(out)
    assert code == 0
    assert cfg["eval_params"]["target_abs_tol"] == 1e-12 and cfg["zero_tol"] == 1e-9


def test_no_subcommand_is_usage_error(capsys):
    assert run(capsys)[0] == 2


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["dh", "build", "-q", "5", "--char", "1", "--bogus"])
    assert info.value.code == 2


def test_characters_list(capsys):
    code, out, _ = run(capsys, "characters", "list", "-q", "5")
    recs = records(out)
    assert code == 0 and [r["label"] for r in recs] == [0, 1, 2, 3]
    assert recs[1]["values"][1] == [1, 4]  # chi(2) = i is a quarter turn
    assert recs[1]["parity"] == 1 and recs[1]["conductor"] == 5


def test_dh_build(capsys):
    code, out, _ = run(capsys, "dh", "build", "--modulus", "5", "--char", "1")
    (r,) = records(out)
    assert code == 0 and abs(r["tan_theta"] - 0.284079) < 1e-6 and len(r["coefficients"]) == 12


def test_eval_L_direct_sum(capsys):
    code, out, _ = run(capsys, "eval", "L", "-q", "5", "--char", "1", "--s", "3,0")
    (r,) = records(out)
    n = np.arange(1, 10**6 + 1)
    chi = np.array([0, 1, 1j, -1j, -1])[n % 5]
    direct = np.sum(chi * n**-3.0)
    assert code == 0 and abs(complex(r["re"], r["im"]) - direct) < 1e-9


def test_dh_eval_and_residual(capsys):
    code, out, _ = run(capsys, "dh", "eval", "-q", "7", "--char", "1", "--s", "-0.5,14")
    assert code == 0 and set(records(out)[0]) == {"re", "im", "est_error"}
    code, out, _ = run(capsys, "dh", "residual", "-q", "7", "--char", "1", "--grid", "-2:3:0:150:4")
    recs = records(out)
    assert code == 0 and len(recs) == 17 and recs[-1]["max_residual"] < 1e-8


def test_invalid_character_exit_2(capsys):
    code, _, err = run(capsys, "dh", "build", "-q", "5", "--char", "2")
    assert code == 2 and "real" in err


def test_zeros_scan_finds_mirror_pair(capsys):
    code, out, _ = run(capsys, "zeros", "scan", "-q", "5", "--char", "1", "--rect", "-1:2:85:86.5")
    recs = records(out)
    assert code == 0 and len(recs) >= 2
    off = [r for r in recs if abs(r["sigma"] - 0.5) > 0.05]
    assert off and all(abs(r["mirror"][1] - r["t"]) < 1e-6 for r in off)


def test_zeros_scan_derivative(capsys):
    code, out, _ = run(capsys, "zeros", "scan", "-q", "5", "--char", "1", "--rect", "0.3:0.6:176.65:176.75",
                       "--derivative")
    recs = records(out)
    assert code == 0 and any(abs(complex(r["sigma"], r["t"]) - (0.45 + 176.7j)) < 0.05 for r in recs)


def test_mirror_failure_exit_4(capsys, monkeypatch):
    def fail(*a, **k):
        raise MirrorNotFound("forced")

    monkeypatch.setattr(zeros, "mirror_check", fail)
    code, _, err = run(capsys, "zeros", "scan", "-q", "5", "--char", "1", "--rect", "-1:2:85:86.5")
    assert code == 4 and "forced" in err


def test_numeric_failure_exit_3(capsys):
    code, _, err = run(capsys, "zeros", "mirror", "-q", "5", "--char", "1", "--at", "4,5")
    assert code == 3 and "numerical" in err


def test_zeros_mirror(capsys):
    code, out, _ = run(capsys, "zeros", "mirror", "-q", "5", "--char", "1", "--at", "0.8085,85.699")
    (r,) = records(out)
    assert code == 0 and abs(r["mirror"][0] + r["sigma"] - 1) < 1e-8


def test_trace_csv_and_svg(capsys, tmp_path):
    svg = tmp_path / "fig.svg"
    code, out, err = run(capsys, "trace", "-q", "5", "--char", "1", "--seed", "0.7242,176.7025", "--phi", "pi",
                         "--rect", "-1:2:174:179", "--through-zero", "--svg", str(svg))
    lines = out.splitlines()
    assert code == 0 and lines[0] == "sigma,t,abs_f,ray_residual" and len(lines) > 50
    assert "curve 0" in err
    assert svg.read_text().startswith("<svg")


def test_trace_svg_format(capsys):
    code, out, _ = run(capsys, "--format", "svg", "trace", "-q", "5", "--char", "1", "--seed", "0.7242,176.7025",
                       "--phi", "pi", "--rect", "-1:2:174:179", "--through-zero")
    assert code == 0 and out.startswith("<svg") and "<polyline" in out


def test_lincomb_demo(capsys):
    code, out, _ = run(capsys, "lincomb", "demo")
    (r,) = records(out)
    assert code == 0 and r["chars"] == [1, 5] and r["residual_at_samples"][0]["residual"] > 1e-4


def test_lincomb_demo_q5_fails(capsys):
    code, _, err = run(capsys, "lincomb", "demo", "-q", "5")
    assert code == 2 and "pairs" in err


def test_global_overrides(capsys):
    code, out, _ = run(capsys, "--tol", "1e-6", "--em-order", "6", "eval", "L", "-q", "5", "--char", "1",
                       "--s", "0.5,20")
    (r,) = records(out)
    assert code == 0 and r["est_error"] < 1e-5


def test_deterministic_output(capsys):
    argv = ["zeros", "scan", "-q", "5", "--char", "1", "--rect", "-1:2:85:86.5"]
    first = run(capsys, *argv)[1]
    assert first == run(capsys, *argv)[1]
