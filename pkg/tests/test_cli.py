import json
import os
import subprocess
import sys

import pytest

from tourney.cli import run
from tourney.generators import gen_random
from tourney.graph import read_tournament, to_text


def _cli(*args, env=None, cwd=None):
    full_env = dict(os.environ)
    full_env.pop("TOURNEY_SEED", None)
    full_env.update(env or {})
    return subprocess.run([sys.executable, "-m", "tourney", *map(str, args)],
                          capture_output=True, text=True, env=full_env, cwd=cwd)


@pytest.fixture
def random_file(tmp_path):
    path = tmp_path / "t.txt"
    path.write_text(to_text(gen_random(300, 3)))
    return path


def test_gen_rotational(tmp_path):
    out = tmp_path / "r.txt"
    res = _cli("gen", "--type", "rotational", "--ell", 3, "-o", out)
    assert res.returncode == 0 and "7 vertices" in res.stderr
    T = read_tournament(out)
    assert T.n == 7 and T.is_tournament


def test_gen_is_byte_identical():
    a = _cli("gen", "--type", "random", "--n", 40, "--seed", 5)
    b = _cli("gen", "--type", "random", "--n", 40, "--seed", 5)
    assert a.returncode == 0 and a.stdout == b.stdout
    assert a.stdout == to_text(gen_random(40, 5))


def test_seed_from_environment():
    a = _cli("gen", "--type", "random", "--n", 20, env={"TOURNEY_SEED": "9"})
    assert a.stdout == to_text(gen_random(20, 9))
    bad = _cli("gen", "--type", "random", "--n", 20, env={"TOURNEY_SEED": "x"})
    assert bad.returncode == 1 and "TOURNEY_SEED" in bad.stderr


def test_hamcycles_then_verify(tmp_path, random_file):
    cert = tmp_path / "c.json"
    res = _cli("hamcycles", random_file, "--k", 2, "-o", cert)
    payload = json.loads(cert.read_text())
    assert payload["command"]["subcommand"] == "hamcycles"
    assert res.returncode == (0 if payload["valid"] else 2)
    res = _cli("verify", cert, random_file)
    rep = json.loads(res.stdout)
    assert rep["input_sha_matches"] and rep["valid"] == payload["valid"]
    assert res.returncode == (0 if rep["valid"] else 2)


def test_hamcycles_output_is_reproducible(tmp_path, random_file):
    runs = [_cli("hamcycles", random_file, "--k", 2).stdout for _ in range(2)]
    assert runs[0] == runs[1] and runs[0]


def test_verify_rejects_tampered_certificate(tmp_path, random_file):
    cert = tmp_path / "c.json"
    _cli("hamcycle", random_file, "-o", cert)
    data = json.loads(cert.read_text())
    data["cycles"] = [data["cycle"][:-1]]
    cert.write_text(json.dumps(data))
    res = _cli("verify", cert, random_file)
    assert res.returncode == 2 and not json.loads(res.stdout)["valid"]


def test_connectivity_and_hamcycle(tmp_path):
    path = tmp_path / "r.txt"
    _cli("gen", "--type", "rotational", "--ell", 2, "-o", path)
    res = _cli("connectivity", path)
    assert res.returncode == 0 and json.loads(res.stdout)["kappa"] == 2
    res = _cli("hamcycle", path)
    assert res.returncode == 0 and sorted(json.loads(res.stdout)["cycle"]) == list(range(5))


def test_hamcycle_on_transitive_is_validated_failure(tmp_path):
    path = tmp_path / "t.txt"
    _cli("gen", "--type", "transitive", "--n", 6, "-o", path)
    res = _cli("hamcycle", path)
    assert res.returncode == 2 and json.loads(res.stdout)["ok"] is False


def test_link(random_file):
    res = _cli("link", random_file, "--pairs", "0:1,2:3")
    rep = json.loads(res.stdout)
    assert res.returncode == 0 and rep["ok"]
    assert [p[0] for p in rep["paths"]] == [0, 2] and [p[-1] for p in rep["paths"]] == [1, 3]


def test_link_failure_reports_cut(tmp_path):
    path = tmp_path / "t.txt"
    _cli("gen", "--type", "transitive", "--n", 10, "-o", path)
    res = _cli("link", path, "--pairs", "9:0")
    rep = json.loads(res.stdout)
    assert res.returncode == 2 and not rep["ok"] and rep["stage"]


def test_extremal_small():
    res = _cli("extremal", "--m", 5, "--ell", 1)
    rep = json.loads(res.stdout)
    assert res.returncode == 0 and rep["claim2_ok"] is True and rep["kappa"] >= 1


def test_malformed_file_reports_position(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("3\n010\n0x1\n100\n")
    res = _cli("connectivity", path)
    assert res.returncode == 1 and "line 3" in res.stderr and "column" in res.stderr


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["gen", "--type", "random"],
    ["hamcycles", "missing.txt", "--k", "2"],
    ["extremal", "--m", "0", "--ell", "1"],
])
def test_usage_errors_exit_one(argv, capsys):
    assert run(argv) == 1
