import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

import flagxi
from flagxi.cli import main

DATA = Path(flagxi.__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_selftest(capsys):
    code, out = run(capsys, "selftest")
    assert code == 0 and out


def test_theta_f4_json(capsys):
    code, out = run(capsys, "theta", "--group", "F4", "--weight", "omega4", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert len(data["coordinates"]) == 4
    assert data["comparison"]["ok"]
    assert all(c["status"] == "match" for c in data["comparison"]["coordinates"])


def test_duan_word(capsys):
    code, out = run(capsys, "duan", "--group", "A2", "--word", "1,2", "--format", "json")
    assert code == 0
    assert json.loads(out)["matrix"] == [[0, 1], [0, 0]]


def test_duan_constant(capsys):
    code, out = run(capsys, "duan", "--group", "A2", "--u", "1", "--v", "1", "--w", "2,1", "--format", "json")
    assert code == 0 and json.loads(out)["value"] == 1


def test_xi_g2_p2_all_match(capsys):
    code, out = run(capsys, "xi", "--group", "G2", "--parabolic", "2", "--format", "json")
    rows = json.loads(out)["rows"]
    assert code == 0 and len(rows) == 2
    assert {r["status"] for r in rows} == {"match"}


def test_xi_g2_p1_reports_print_conflict(capsys):
    code, out = run(capsys, "xi", "--group", "G2", "--parabolic", "1", "--format", "json")
    statuses = sorted(r["status"] for r in json.loads(out)["rows"])
    assert statuses == ["match", "mismatch(paper)"]
    assert code == 1


def test_json_is_stable(capsys):
    _, a = run(capsys, "xi", "--group", "G2", "--format", "json")
    _, b = run(capsys, "xi", "--group", "G2", "--format", "json")
    assert a == b


def test_ogring_hilbert(capsys):
    code, out = run(capsys, "ogring", "--k", "2", "--n", "4", "--hilbert", "--format", "json")
    data = json.loads(out)
    assert code == 0 and sum(data["hilbert"]) == 24


def test_ogring_mod2(capsys):
    code, out = run(capsys, "ogring", "--k", "2", "--stable", "--mod2-injectivity", "--format", "json")
    rep = json.loads(out)["mod2_injectivity"]
    assert code == 0
    assert rep["injective"] and rep["generator_images_ok"] and rep["parity_ok"]


@pytest.mark.parametrize("argv", [
    ["xi", "--group", "E8"],
    ["ogring", "--k", "1", "--n", "4"],
    ["duan", "--group", "A2", "--word", "1,1"],
    ["theta", "--group", "G2", "--weight", "omega9"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert main(argv) == 2
    assert not capsys.readouterr().out


def test_corrupted_corpus_exit_2(tmp_path, capsys):
    bad = tmp_path / "data"
    shutil.copytree(DATA, bad)
    p = bad / "paper_tables.json"
    p.write_text(p.read_text() + " ")
    code = main(["verify", "--suite", "golden", "--corpus-dir", str(bad)])
    assert code == 2
    assert "checksum" in capsys.readouterr().err.lower()


def test_rank3_suite(capsys):
    code, _ = run(capsys, "verify", "--suite", "rank3-engines")
    assert code == 0


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "flagxi", "selftest"], capture_output=True, text=True)
    assert out.returncode == 0
