import json
import subprocess
import sys

import pytest

from multiwp.cli import main, parse_complex, parse_index
from multiwp.core import Index


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def test_parse_complex():
    assert parse_complex("i") == 1j
    assert parse_complex("-i") == -1j
    assert parse_complex("2i") == 2j
    assert parse_complex("0.3+0.2i") == 0.3 + 0.2j
    assert parse_complex("1/2+2i") == 0.5 + 2j
    assert parse_complex("-0.4-1.5j") == -0.4 - 1.5j
    assert parse_complex("3") == 3 + 0j
    assert parse_complex("1e-2+2e-1i") == 0.01 + 0.2j
    with pytest.raises(ValueError):
        parse_complex("")


def test_parse_index():
    assert parse_index("2,3") == Index((2, 3))
    assert parse_index("-") == Index(())
    with pytest.raises(ValueError):
        parse_index("2,0")


def test_eval_reduce_cross_command(capsys):
    # eval and reduce agree at the same point (coarse settings for speed)
    code, out = run_cli(["eval", "--fn", "multiwp", "--index", "2,2",
                         "--z", "0.3+0.2i", "--tau", "i",
                         "-M", "12", "-N", "2000", "--format", "json"], capsys)
    assert code == 0
    val = json.loads(out)["outputs"][0]
    direct = complex(float(val["re"]), float(val["im"]))

    code, out = run_cli(["reduce", "--index", "2,2", "--tau", "i",
                         "--format", "json"], capsys)
    assert code == 0
    rows = json.loads(out)["outputs"]
    from multiwp.weier import wp_k
    total = 0j
    for row in rows:
        c = parse_complex(row["coeff_value"])
        n = row["wp_n"]
        total += c * (wp_k(n, 0.3 + 0.2j, 1j) if n else 1.0)
    assert abs(total - direct) < 1e-6


def test_table_csv(capsys):
    code, out = run_cli(["table", "--max-weight", "6", "--format", "csv"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "weight,dim_conj,rel_conj,rel_anti,deficit"
    assert lines[-1] == "6,4,1,1,0"


def test_qexp_json_roundtrip(capsys):
    code, out = run_cli(["qexp", "--index", "2,3", "--tau", "2i",
                         "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["status"] == "ok"
    v = parse_complex(rep["outputs"][0]["value"])
    from multiwp.meisen import meis_qexp
    assert abs(v - meis_qexp((2, 3), 2j)) < 1e-12


def test_verify_exit_codes(capsys):
    code, out = run_cli(["verify", "--suite", "depth-one"], capsys)
    assert code == 0
    assert "PASS" in out and "FAIL" not in out


def test_bad_arguments_exit_2(capsys):
    code = main(["eval", "--fn", "multiwp", "--index", "2,0",
                 "--z", "0.3+0.2i", "--tau", "i"])
    assert code == 2


def test_seeded_determinism(capsys):
    args = ["verify", "--suite", "repeated-index", "--seed", "11", "--format", "json"]
    _, out1 = run_cli(args, capsys)
    _, out2 = run_cli(args, capsys)
    r1 = [c["residual"] for c in json.loads(out1)["outputs"]]
    r2 = [c["residual"] for c in json.loads(out2)["outputs"]]
    assert r1 == r2


def test_console_entrypoint():
    proc = subprocess.run([sys.executable, "-m", "multiwp.cli", "table",
                           "--max-weight", "4"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "weight" in proc.stdout


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "multiwp.cfg"
    cfg.write_text("# comment\nM = 12\nN = 2000\nq_order=48\ntol=1e-7\n")
    code, out = run_cli(["eval", "--fn", "multiwp", "--index", "2,2",
                         "--z", "0.3+0.2i", "--tau", "i",
                         "--config", str(cfg), "--format", "json"], capsys)
    assert code == 0
    # flags override the file
    code2, out2 = run_cli(["eval", "--fn", "multiwp", "--index", "2,2",
                           "--z", "0.3+0.2i", "--tau", "i",
                           "--config", str(cfg), "-N", "4000",
                           "--format", "json"], capsys)
    assert code2 == 0
    v1 = json.loads(out)["outputs"][0]["re"]
    v2 = json.loads(out2)["outputs"][0]["re"]
    assert abs(float(v1) - float(v2)) < 1e-6 and v1 != v2
