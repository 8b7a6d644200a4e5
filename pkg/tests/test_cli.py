import io
import json
import math

import numpy as np
import pytest

from fourier_moduli import __version__
from fourier_moduli.cli import build_parser, main


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def test_version(capsys):
    code = main(["--version"])
    assert code == 0
    assert __version__ in capsys.readouterr().out


@pytest.mark.parametrize("sub,flags", [
    ("gfn", ["--dim", "--alpha", "--v-max", "--v-samples", "--caption-normalization", "--out"]),
    ("mc", ["--field", "--p", "--m", "--q", "--h", "--rule-order", "--out"]),
    ("tail", ["--spectrum", "--pprime", "--mode", "--m", "--t", "--out"]),
    ("fit", ["--profile", "--model"]),
    ("verify", ["--case", "--field", "--spectrum", "--gamma", "--alpha", "--m", "--pprime", "--report"]),
    ("demo", ["--case", "--report"]),
])
def test_help_lists_flags(sub, flags, capsys):
    assert main([sub, "--help"]) == 0
    text = capsys.readouterr().out
    for flag in flags:
        assert flag in text


def test_usage_errors_exit_two():
    assert run(["mc", "--field", "corpus:ball"])[0] == 2
    assert run(["frobnicate"])[0] == 2
    assert run(["gfn", "--dim", "3", "--alpha", "1", "--v-max", "5", "--bogus"])[0] == 2
    code, _, err = run(["tail", "--spectrum", "corpus:gaussian?d=1", "--pprime", "2", "--mode", "true",
                        "--t", "dyadic:1..2^10:11"])
    assert code == 2 and "exceeds the usable band" in err
    code, _, err = run(["verify", "--case", "thm11", "--field", "corpus:ball?d=1"])
    assert code == 2 and "d1-counterexample" in err


def test_gfn_caption_normalization(tmp_path):
    out = tmp_path / "g1.csv"
    code, _, _ = run(["gfn", "--dim", "3", "--alpha", "1", "--v-max", "20", "--v-samples", "256",
                      "--caption-normalization", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "v,value,lower_bound,upper_bound"
    a = np.loadtxt(out, delimiter=",", skiprows=1)
    ref = 4 * math.pi * (1 - np.sinc(a[:, 0] / math.pi))
    assert np.max(np.abs(a[:, 1] - ref)) < 1e-9
    assert (a[:, 2] <= a[:, 1] + 1e-15).all() and (a[:, 1] <= a[:, 3]).all()


def test_mc_tail_fit_pipeline(tmp_path):
    mc = tmp_path / "mc.csv"
    assert run(["mc", "--field", "corpus:ball?d=1&r=0.5&L=4&N=1024", "--p", "2", "--m", "1", "--q", "2",
                "--h", "dyadic:2^-6..2^-1:6", "--out", str(mc)])[0] == 0
    assert mc.read_text().startswith("h,value\n")
    code, out, _ = run(["fit", "--profile", str(mc), "--model", "power"])
    assert code == 0 and "gamma=0.5 " in out
    tail = tmp_path / "tail.csv"
    assert run(["tail", "--spectrum", "corpus:powerlaw?d=2&alpha=0.5", "--pprime", "2", "--mode", "modified",
                "--m", "1", "--t", "dyadic:1..2^10:11", "--out", str(tail)])[0] == 0
    assert len(tail.read_text().splitlines()) == 12


def test_fit_synthetic_prints_gamma(tmp_path):
    t = 2.0 ** np.arange(0, 11)
    p = tmp_path / "tail.csv"
    p.write_text("t,value\n" + "".join(f"{a:.17g},{b:.17g}\n" for a, b in zip(t, t**-0.5)))
    code, out, _ = run(["fit", "--profile", str(p), "--model", "auto"])
    assert code == 0 and out.startswith("gamma=0.5 ")


def test_fit_zero_tail(tmp_path):
    p = tmp_path / "z.csv"
    p.write_text("t,value\n1,1\n2,0.5\n4,0\n8,0\n")
    code, out, _ = run(["fit", "--profile", str(p)])
    assert code == 0 and "ZeroTail" in out


def test_verify_cor15_report_schema(tmp_path):
    rep = tmp_path / "out.json"
    code, out, _ = run(["verify", "--case", "cor15", "--field", "corpus:ball?d=2&r=1", "--gamma", "1",
                        "--report", str(rep)])
    assert code == 0 and "passed" in out
    d = json.loads(rep.read_text())
    assert {"case", "grid", "lower_constant", "upper_constant", "fit", "passed", "notes"} <= set(d)
    assert set(d["grid"]) == {"t_min", "t_max", "count"}
    assert set(d["fit"]) == {"gamma", "log_power", "amplitude", "max_rel_residual", "model"}
    assert d["passed"] is True


def test_verify_other_cases():
    assert run(["verify", "--case", "cor12", "--field", "corpus:gaussian?d=2&N=256", "--m", "1"])[0] == 0
    assert run(["verify", "--case", "thm13", "--spectrum", "corpus:powerlaw?d=2&alpha=0.5"])[0] == 0
    assert run(["verify", "--case", "thm14", "--spectrum", "corpus:powerlaw?d=2&alpha=0.3",
                "--alpha", "0.3"])[0] == 0
    assert run(["verify", "--case", "thm14", "--spectrum", "corpus:powerlaw?d=2"])[0] == 2


def test_demo_exit_codes(tmp_path):
    code, out, _ = run(["demo", "--case", "d1-counterexample", "--report", str(tmp_path / "d1.json")])
    assert code == 0
    code, out, _ = run(["demo", "--case", "gamma2-failure"])
    report = json.loads(out)
    assert code == (0 if report["passed"] else 1)


def test_outputs_are_byte_identical(tmp_path):
    argv = ["tail", "--spectrum", "corpus:borderline?d=2", "--pprime", "2", "--mode", "bessel",
            "--t", "dyadic:1..2^6:7"]
    a = run(argv + ["--out", str(tmp_path / "a.csv")])
    b = run(argv + ["--out", str(tmp_path / "b.csv")])
    assert a[0] == b[0] == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_parser_has_all_subcommands():
    p = build_parser()
    text = p.format_help()
    for sub in ("gfn", "mc", "tail", "fit", "verify", "demo"):
        assert sub in text
