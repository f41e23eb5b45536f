import json
import subprocess
import sys
from fractions import Fraction

import pytest

from walshlab.cli import config_from_args, main, parse_pattern, parse_t, resolve_backend
from walshlab.counterexample import ALTERNATING, BlockParameter
from walshlab.spectral import EXACT, FLOAT


def test_parse_t_grammar():
    assert parse_t("0").bits(8) == [0] * 8
    third = parse_t("1/3")
    assert third.preperiod == () and third.period == (0, 1)
    assert [j for j in range(10) if third[j]] == [1, 3, 5, 7, 9]
    b = parse_t("bits:101(0)")
    assert b.bits(5) == [1, 0, 1, 0, 0] and b.to_fraction() == Fraction(5, 8)
    assert parse_t("bits:1").to_fraction() == Fraction(1, 2)
    assert parse_t("bits:(01)").to_fraction() == Fraction(1, 3)
    assert parse_t("3/8").is_dyadic_rational


@pytest.mark.parametrize("spec", ["1/0", "3/2", "1/1", "bits:102", "x", "-1/3", "bits:(1)", ""])
def test_parse_t_rejects(spec):
    with pytest.raises(ValueError):
        parse_t(spec)


def test_parse_pattern():
    assert parse_pattern("alternating") == ALTERNATING
    assert parse_pattern("2,3,1") == BlockParameter(2, 3, 1)
    with pytest.raises(ValueError):
        parse_pattern("2,3")


def test_backend_auto():
    assert resolve_backend("auto", 16) == EXACT and resolve_backend("auto", 17) == FLOAT
    assert resolve_backend(FLOAT, 3) == FLOAT


def test_config():
    cfg = config_from_args(["scan", "--exp-min", "2", "--checks", "ts,mtk", "--A-max", "4"])
    assert cfg.exp_min == 2 and cfg.checks == ("ts", "mtk") and cfg.A_max == 4
    with pytest.raises(ValueError):
        config_from_args(["scan", "--checks", "nope"])


def test_lebesgue_command(capsys):
    assert main(["lebesgue", "--n", "5", "--t", "0"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == ["7/4", "J1=3/4", "J2=3/8", "J3=5/8"]
    assert main(["lebesgue", "--n", "1", "--t", "bits:1(0)"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "1"
    assert main(["lebesgue", "--n", "2", "--t", "1/4", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["L"] == "1" and doc["schema"] == 1


def test_errors_give_nonzero_exit(capsys):
    assert main(["lebesgue", "--t", "0"]) == 2
    assert main(["lebesgue", "--n", "3", "--t", "5/4"]) == 2
    assert "error" in capsys.readouterr().err


def test_scan_csv_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["scan", "--exp-min", "2", "--exp-max", "9", "--samples", "500", "--seed", "3"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "# schema=1"
    assert lines[1] == ("n,N,t_bits,m,V_n,V_m,T_nm,T_mn,L_num,L_den,upper_margin,"
                        "lower_margin_C1,lower_margin_C2,mtk_ok,sws_ok")
    assert len(lines) == 502
    assert "." not in "".join(lines[2:])  # exact report: no floats


def test_scan_json_mirrors_csv(tmp_path):
    c, j = tmp_path / "s.csv", tmp_path / "s.json"
    base = ["scan", "--exp-min", "1", "--exp-max", "3"]
    main(base + ["--out", str(c)])
    main(base + ["--out", str(j), "--format", "json"])
    rows = c.read_text().splitlines()[2:]
    recs = json.loads(j.read_text())["records"]
    assert len(rows) == len(recs)
    assert ",".join(recs[5].values()) == rows[5]


def test_kernel_and_sweep_commands(capsys):
    assert main(["kernel", "--n", "3", "--kind", "dirichlet", "--depth", "2"]) == 0
    assert capsys.readouterr().out.splitlines()[2:] == ["0,3", "1,1", "2,1", "3,-1"]
    assert main(["fejer-norms", "--t", "0", "--exp-min", "2", "--exp-max", "6", "--samples", "8"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[1] == "t,N,count,max_l1,argmax,max_exact,over_toledo" and len(out) == 7


def test_counterexample_command(capsys):
    assert main(["counterexample", "--A-max", "3"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[1] == "A,n,depth,yA,kernel_l1_num_or_float,llogl_fA,orlicz_lb_Q1,orlicz_lb_Q2"
    assert out[3].startswith("2,128,7,3.09375,4101/1024,")


def test_selftest_and_module_entry():
    r = subprocess.run([sys.executable, "-m", "walshlab", "selftest"], capture_output=True, text=True)
    assert r.returncode == 0, r.stdout
    assert ",0," not in r.stdout
