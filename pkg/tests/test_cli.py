import io
import json
import shutil
import subprocess
import sys

import jsonschema
import pytest

from abar.cli import SCHEMA_NAMES, load_schema, main


def run(argv):
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


def run_json(argv):
    code, text = run(argv)
    return code, json.loads(text)


def ints_are_strings(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return True
    if isinstance(obj, int):
        return False
    if isinstance(obj, dict):
        return all(ints_are_strings(v) for v in obj.values())
    return all(ints_are_strings(v) for v in obj)


CASES = [
    ["coeffs", "--fn", "abar", "--t", "3", "--P", "7"],
    ["coeffs", "--fn", "ct", "--t", "5", "--P", "30", "--M", "7"],
    ["coeffs", "--fn", "p", "--P", "40"],
    ["coeffs", "--fn", "overpartition", "--P", "10"],
    ["certify", "--family", "B", "--alpha", "1", "--m", "1", "--k", "1"],
    ["certify", "--family", "D", "--alpha", "0", "--m", "5", "--k", "2"],
    ["certify", "--quotient", '{"terms": {"24": -2, "48": 1, "72": 10, "144": -5}}'],
    ["certify", "--quotient", '{"terms": {"1": -24}}'],
    ["density", "--t", "3", "--M", "2,4,3,9", "--checkpoints", "100,1000"],
    ["hecke", "--mode", "probe", "--primes", "5,7", "--exponent", "2"],
    ["hecke", "--mode", "cong1", "--primes", "5", "--d", "1"],
    ["hecke", "--mode", "estimate-c", "--d", "1", "--n-range", "200"],
    ["scan", "--t", "5", "--M", "5", "--A-max", "6", "--X", "500"],
    ["oracle", "--t", "4", "--n", "10"],
]


def test_examples_from_the_docs():
    code, out = run_json(["coeffs", "--fn", "abar", "--t", "3", "--P", "7"])
    assert code == 0
    assert out["result"]["values"] == ["1", "2", "4", "2", "2", "0", "4"]
    code, out = run_json(["certify", "--family", "B", "--alpha", "1", "--m", "1", "--k", "1"])
    assert code == 0
    assert out["result"]["holomorphic"] is True
    assert out["result"]["level"] == "576" and out["result"]["weight"] == "2"
    assert out["result"]["family"]["stated_level_admissible"] is True
    assert run(["coeffs", "--fn", "abar", "--t", "0"])[0] == 1


@pytest.mark.parametrize("argv", CASES, ids=lambda a: "-".join(a[:3]))
def test_json_output_validates(argv):
    code, out = run_json(argv)
    assert code in (0, 3)
    jsonschema.validate(out, load_schema(argv[0]))
    assert ints_are_strings(out)
    assert out["config"]["command"] == argv[0]


@pytest.mark.parametrize("argv", CASES[::3], ids=lambda a: "-".join(a[:3]))
def test_output_is_byte_identical(argv):
    assert run(argv) == run(argv)


def test_every_subcommand_has_a_schema():
    for name in SCHEMA_NAMES:
        assert load_schema(name)["type"] == "object"


def test_exit_codes(capsys):
    assert run(["certify", "--quotient", '{"terms": {"1": -24}}'])[0] == 3
    assert run(["hecke", "--mode", "probe", "--primes", "101", "--P", "100", "--exponent", "3"])[0] == 2
    assert run(["hecke", "--mode", "cong1", "--primes", "5,7,11,13,17,19,23,29", "--n-range", "500"])[0] == 2
    assert run(["certify", "--quotient", '{"terms": {"1": -1}}'])[0] == 1
    assert run(["certify", "--family", "B", "--alpha", "1"])[0] == 1
    assert run(["certify", "--family", "B", "--alpha", "0", "--m", "3", "--k", "1"])[0] == 1
    assert run(["density", "--t", "3", "--M", "1"])[0] == 1
    assert run(["density", "--t", "5", "--M", "7", "--mode", "theorem"])[0] == 1
    assert run(["scan", "--t", "1", "--M", "2"])[0] == 1
    capsys.readouterr()


def test_unknown_input_prints_usage(capsys):
    assert run(["frobnicate"])[0] == 1
    assert "usage:" in capsys.readouterr().err
    assert run(["coeffs", "--fn", "abar", "--t", "3", "--bogus"])[0] == 1
    assert "usage:" in capsys.readouterr().err
    assert run([])[0] == 1


def test_csv_has_config_header():
    code, text = run(["density", "--t", "3", "--M", "4", "--checkpoints", "10,100", "--format", "csv"])
    assert code == 0
    lines = text.splitlines()
    header = [ln for ln in lines if ln.startswith("#")]
    assert "# t=3" in header and "# command=density" in header
    body = [ln for ln in lines if not ln.startswith("#")]
    assert body[0] == "M,X,count,ratio"
    assert len(body) == 3


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nfn = abar\nt = 3\nP = 7\n")
    code, out = run_json(["coeffs", "--config", str(cfg)])
    assert code == 0
    assert out["result"]["values"] == ["1", "2", "4", "2", "2", "0", "4"]
    # command line wins over the file
    code, out = run_json(["coeffs", "--config", str(cfg), "--P", "3"])
    assert out["result"]["values"] == ["1", "2", "4"]
    cfg.write_text("t = three\n")
    assert run(["coeffs", "--fn", "abar", "--config", str(cfg)])[0] == 1
    cfg.write_text("nonsense = 1\n")
    assert run(["coeffs", "--config", str(cfg)])[0] == 1
    assert run(["coeffs", "--config", str(tmp_path / "missing.cfg")])[0] == 1


def test_oracle_golden_file(tmp_path):
    golden = tmp_path / "golden.txt"
    code, out = run_json(["oracle", "--t", "3", "--n", "12", "--golden", str(golden)])
    assert code == 0 and out["result"]["golden"] == "written"
    assert golden.read_text().splitlines()[1:4] == ["3 0 1", "3 1 1", "3 2 2"]
    code, out = run_json(["oracle", "--t", "3", "--n", "12", "--golden", str(golden)])
    assert out["result"]["golden"] == "match"
    golden.write_text(golden.read_text().replace("3 2 2", "3 2 5"))
    assert run(["oracle", "--t", "3", "--n", "12", "--golden", str(golden)])[0] == 1


def test_density_cache_dir(tmp_path):
    argv = ["density", "--t", "9", "--M", "3", "--checkpoints", "1000", "--cache-dir", str(tmp_path)]
    first = run(argv)
    assert list(tmp_path.glob("*.bin"))
    assert run(argv) == first


def test_certify_from_file(tmp_path):
    spec = tmp_path / "fam.json"
    spec.write_text(json.dumps({"family": "D", "alpha": 1, "m": 1, "k": 1}))
    code, out = run_json(["certify", "--input", str(spec)])
    assert code == 0 and out["result"]["family"]["stated_level"] == "432"


def test_console_script():
    exe = shutil.which("abar")
    cmd = [exe] if exe else [sys.executable, "-m", "abar.cli"]
    proc = subprocess.run(cmd + ["coeffs", "--fn", "abar", "--t", "3", "--P", "7", "--format", "csv"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert [ln for ln in proc.stdout.splitlines() if not ln.startswith("#")][1:] == [
        "0,1", "1,2", "2,4", "3,2", "4,2", "5,0", "6,4"
    ]
