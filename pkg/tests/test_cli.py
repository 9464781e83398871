import json
import shutil
from pathlib import Path

import pytest

from egalmatch import cli
from egalmatch.formats import instance_to_json

from conftest import COUNTEREXAMPLE, inst


def write(tmp_path, rows, T, name="inst.json"):
    p = tmp_path / name
    p.write_text(json.dumps(instance_to_json(inst(rows, T))))
    return str(p)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_fpt(tmp_path, capsys):
    code, out, _ = run(capsys, "solve", write(tmp_path, COUNTEREXAMPLE, 2), "--alg", "fpt")
    doc = json.loads(out)
    assert code == 0 and doc["perRound"][-1]["bottleneck"] == "6/1"
    assert doc["guarantee"] == {"type": "exact-final", "additiveSlack": "0/1"}
    assert list(doc) == ["algorithm", "sequence", "perRound", "guarantee"]


def test_solve_oracle_round_one(tmp_path, capsys):
    code, out, _ = run(capsys, "solve", write(tmp_path, COUNTEREXAMPLE, 2), "--alg", "oracle", "--round", "1")
    assert code == 0 and json.loads(out)["perRound"][0]["bottleneck"] == "2/1"


def test_solve_class_mismatch(tmp_path, capsys):
    code, _, err = run(capsys, "solve", write(tmp_path, COUNTEREXAMPLE, 2), "--alg", "binary")
    assert code == 1 and "0 or 1" in err


def test_solve_limit(tmp_path, capsys):
    path = write(tmp_path, COUNTEREXAMPLE, 4)
    code, _, err = run(capsys, "solve", path, "--alg", "oracle", "--budget", "5")
    assert code == 2 and "limit" in err
    code, _, _ = run(capsys, "solve", path, "--alg", "fpt", "--fpt-limit", "2")
    assert code == 2


def test_budget_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("EGAL_MATCH_BUDGET", "5")
    code, _, _ = run(capsys, "solve", write(tmp_path, COUNTEREXAMPLE, 4), "--alg", "oracle")
    assert code == 2


@pytest.mark.parametrize("text", ["{", "[]", '{"agents": 1}',
                                  '{"agents": 1, "goods": 1, "rounds": 1, "valuations": [["-1"]]}',
                                  '{"agents": 1, "goods": 1, "rounds": 1, "valuations": [[0.5]]}',
                                  '{"agents": 2, "goods": 1, "rounds": 1, "valuations": [["1"]]}'])
def test_malformed_input(tmp_path, capsys, text):
    p = tmp_path / "bad.json"
    p.write_text(text)
    code, _, err = run(capsys, "solve", str(p), "--alg", "approx")
    assert code == 1 and err


def test_missing_file_and_bad_usage(tmp_path, capsys):
    assert run(capsys, "solve", str(tmp_path / "nope.json"), "--alg", "approx")[0] == 1
    assert run(capsys, "solve", write(tmp_path, [[1]], 1), "--alg", "nonsense")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "solve", write(tmp_path, [[1]], 1), "--alg", "approx", "--round", "0")[0] == 1


def test_decimal_and_fraction_valuations(tmp_path, capsys):
    p = tmp_path / "i.json"
    p.write_text(json.dumps({"agents": 2, "goods": 2, "rounds": 2, "valuations": [["0.5", "1/3"], ["2", "1.25"]]}))
    code, out, _ = run(capsys, "solve", str(p), "--alg", "fpt")
    assert code == 0 and json.loads(out)["perRound"][-1]["values"] == ["1/1", "5/2"]


def test_padding_goods_are_null(tmp_path, capsys):
    code, out, _ = run(capsys, "solve", write(tmp_path, [[3, 1], [2, 2], [1, 3]], 3), "--alg", "fpt")
    seq = json.loads(out)["sequence"]
    assert code == 0 and all(row.count(None) == 1 for row in seq)


def test_solve_table_and_out(tmp_path, capsys):
    out_path = tmp_path / "r.txt"
    code, out, _ = run(capsys, "solve", write(tmp_path, COUNTEREXAMPLE, 2), "--alg", "approx",
                       "--format", "table", "--out", str(out_path))
    text = out_path.read_text()
    assert code == 0 and out == "" and "bottleneck" in text and "additive-final" in text


def test_dump_network(tmp_path, capsys):
    code, out, err = run(capsys, "solve", write(tmp_path, [[1, 0], [1, 1]], 2), "--alg", "binary", "--dump-network")
    assert code == 0 and json.loads(err)["required"] > 0
    code, _, _ = run(capsys, "solve", write(tmp_path, [[1, 0], [1, 1]], 2), "--alg", "fpt", "--dump-network")
    assert code == 1


def test_compare_identical(tmp_path, capsys):
    code, out, _ = run(capsys, "compare", write(tmp_path, [[5, 3, 1]] * 3, 4), "--with-oracle", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and "identical-greedy" in doc["algorithms"]
    assert all(r["withinBound"]["identical-greedy"] for r in doc["perRound"])


def test_compare_two_agents(tmp_path, capsys):
    code, out, _ = run(capsys, "compare", write(tmp_path, [[5, 2, 1], [4, 1, 3]], 5), "--with-oracle",
                       "--format", "json")
    doc = json.loads(out)
    assert code == 0 and all(r["gap"]["two-agent-anytime"] == "0/1" for r in doc["perRound"])


def test_compare_counterexample(tmp_path, capsys):
    code, out, _ = run(capsys, "compare", write(tmp_path, COUNTEREXAMPLE, 2), "--with-oracle",
                       "--alg", "anytime-approx", "--alg", "approx", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["algorithms"] == ["anytime-approx", "approx"]
    assert doc["slack"]["anytime-approx"] == "75/1"
    assert all(r["withinBound"]["anytime-approx"] for r in doc["perRound"])
    assert doc["perRound"][0]["withinBound"]["approx"] is None


def test_compare_table(tmp_path, capsys):
    code, out, _ = run(capsys, "compare", write(tmp_path, COUNTEREXAMPLE, 2), "--with-oracle")
    assert code == 0 and "OPT" in out and "NO" not in out


def test_verify_small(capsys):
    code, out, _ = run(capsys, "verify", "--seed", "3", "--count", "2")
    assert code == 0 and out.endswith("verify: ok\n")


def test_verify_corrupt_golden(tmp_path, capsys):
    src = Path(cli.__file__).parent / "golden" / "binary-3x4.json"
    bad = tmp_path / "golden"
    bad.mkdir()
    doc = json.loads(src.read_text())
    doc["result"]["perRound"][-1]["bottleneck"] = "99/1"
    (bad / src.name).write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", "--count", "1", "--golden", str(bad))
    assert code == 3
    assert "FAIL module=golden instance=binary-3x4.json" in out and '"bottleneck": "3/1"' in out and '"99/1"' in out


def test_verify_unreadable_golden(tmp_path, capsys):
    (tmp_path / "x.json").write_text("{}")
    code, out, _ = run(capsys, "verify", "--count", "1", "--golden", str(tmp_path))
    assert code == 3 and "unreadable" in out


def test_verify_is_deterministic(capsys):
    first = run(capsys, "verify", "--seed", "42", "--count", "3")
    second = run(capsys, "verify", "--seed", "42", "--count", "3")
    assert first == second


def test_bundled_golden_files_present():
    assert len(list((Path(cli.__file__).parent / "golden").glob("*.json"))) >= 8


def test_golden_copy_roundtrip(tmp_path, capsys):
    shutil.copytree(Path(cli.__file__).parent / "golden", tmp_path / "g")
    code, _, _ = run(capsys, "verify", "--count", "0", "--golden", str(tmp_path / "g"))
    assert code == 0


def test_verify_reports_budget_exhaustion(capsys):
    code, out, _ = run(capsys, "verify", "--count", "1", "--budget", "3", "--golden", str(Path(cli.__file__).parent))
    assert code == 3 and "property=within budget" in out and "LimitExceededError" in out
