import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from hltlab import cli

GOLDEN = Path(__file__).parent / "golden"


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_constants_hardy_two_over_pi(capsys):
    code, out, _ = run_cli(capsys, "constants", "--d", "3", "--s", "0.5")
    assert code == cli.EXIT_OK
    data = json.loads(out)
    assert abs(data["hardy_constant"] - 2 / math.pi) <= 1e-12
    assert data["passed"] and data["failures"] == []


@pytest.mark.parametrize("d,s", [("1", "0.5"), ("3", "1.5"), ("2", "1.0"), ("3", "-0.1")])
def test_malformed_s_exit_two(capsys, d, s):
    code, _, err = run_cli(capsys, "constants", "--d", d, "--s", s)
    assert code == cli.EXIT_INVALID
    assert "invalid input" in err


def test_gamma_zero_rejected(capsys):
    code, _, _ = run_cli(capsys, "lt-constant", "--d", "1", "--s", "0.25", "--gamma", "0")
    assert code == cli.EXIT_INVALID


def test_sobolev_out_of_range(capsys):
    code, _, _ = run_cli(capsys, "sobolev-constant", "--q", "3.5")
    assert code == cli.EXIT_INVALID


def test_sobolev_json(capsys):
    code, out, _ = run_cli(capsys, "sobolev-constant", "--q", "2")
    assert code == 0
    res = json.loads(out)["results"][0]
    assert res["bound"] == pytest.approx(20.083057099010972028, rel=1e-10)


def test_lt_verify_csv_golden_columns(capsys, tmp_path):
    path = tmp_path / "lt.csv"
    code, _, _ = run_cli(capsys, "lt-verify", "--family", "gaussian", "--depths", "1", "--format", "csv",
                         "-o", str(path))
    assert code == 0
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode("utf-8").splitlines()
    assert lines[0] + "\n" == (GOLDEN / "lt_verify_columns.csv").read_text()
    assert len(lines) == 2
    row = dict(zip(lines[0].split(","), lines[1].split(",")))
    assert row["family"] == "gaussian" and float(row["ratio"]) <= 1


def test_determinism_bytes(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"c{i}.json"
        assert cli.main(["constants", "--d", "2", "--s", "0.5", "-o", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_to_json_seventeen_digits():
    text = cli.to_json({"x": 0.1, "y": [1 / 3, 2.0], "z": math.inf, "n": np.int64(3), "b": np.bool_(True)})
    assert '"x": 0.10000000000000001' in text
    assert "0.33333333333333331" in text
    assert '"z": "inf"' in text
    assert '"n": 3' in text and '"b": true' in text
    assert float(text.split('"x": ')[1].split(",")[0]) == 0.1


def test_checks_manifest():
    c = cli.Checks()
    c.add("ok", True)
    c.add("bad", False, value=2.0)
    assert not c.passed
    assert c.failures() == [{"check": "bad", "passed": False, "value": 2.0}]


def test_failed_checks_exit_one(capsys, monkeypatch):
    def fake(d, s, alpha_grid=200):
        c = cli.Checks()
        c.add("forced", False)
        return cli._finish({}, c)

    monkeypatch.setattr(cli, "cmd_constants", fake)
    code, _, err = run_cli(capsys, "constants", "--d", "3", "--s", "0.5")
    assert code == cli.EXIT_FAILED
    assert "forced" in err


def test_thread_env_order_stable(monkeypatch):
    monkeypatch.setenv("HLT_NUM_THREADS", "4")
    assert cli._pmap(lambda x: x * x, range(10)) == [x * x for x in range(10)]
    monkeypatch.setenv("HLT_NUM_THREADS", "many")
    with pytest.raises(cli.DomainError):
        cli._pmap(lambda x: x, [1, 2])


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "hltlab", "constants", "--d", "3", "--s", "1"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["hardy_constant"] == pytest.approx(0.25, abs=1e-12)
