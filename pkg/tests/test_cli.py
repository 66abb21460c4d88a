import json

import pytest

from suitcore.cli import main
from suitcore.core import PermutationArray, write_text_array
from suitcore.verify import Verdict

from conftest import TWO_SYMBOL_CORE


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct_packing(tmp_path, capsys):
    out = tmp_path / "w.json"
    code, stdout, _ = run(capsys, "construct", "--route", "packing", "--t", 7, "--v", 6, "--l", 5, "--seed", 1,
                          "-o", out)
    assert code == 0 and "(17,6,7)" in stdout
    d = json.loads(out.read_text())
    assert d["n"] == 17 and len(d["rows"]) == 17 and d["certificate"]["status"] == "certified"
    assert d["provenance"]["route"] == "packing" and d["provenance"]["packing"]["k"] == 3


def test_construct_ramsey(tmp_path, capsys):
    out = tmp_path / "w.json"
    code, _, _ = run(capsys, "construct", "--route", "ramsey", "--s", 16, "--delta", 1, "--alpha", 3,
                     "--k", "3,3,3", "-o", out)
    assert code == 0
    d = json.loads(out.read_text())
    assert (d["n"], d["v"], d["t"]) == (294, 19, 33)
    assert d["provenance"]["coloring"]["n"] == 16


def test_construct_infeasible(capsys):
    code, _, err = run(capsys, "construct", "--route", "packing", "--t", 7, "--v", 6, "--l", 3)
    assert code == 4 and "infeasible" in err


def test_construct_usage_errors(capsys):
    assert run(capsys, "construct", "--route", "packing")[0] == 4
    with pytest.raises(SystemExit) as exc:
        main(["construct", "--route", "nope"])
    assert exc.value.code == 1


def test_construct_ingredient_failure(capsys):
    code, _, err = run(capsys, "construct", "--route", "ramsey", "--s", 16, "--delta", 1, "--alpha", 3,
                       "--k", "3,3,3", "--budget", 1)
    assert code == 2 and "construction failed" in err


def test_construct_skewed_preset(tmp_path, capsys):
    out = tmp_path / "w.json"
    code, _, _ = run(capsys, "construct", "--route", "ramsey", "--s", 8, "--delta", 1, "--alpha", 3,
                     "--l", 11, "--preset", "skewed", "-o", out)
    assert code == 0
    assert json.loads(out.read_text())["provenance"]["k_vec"] == [3, 3, 5]


def test_verify_small_core(tmp_path, capsys):
    path = tmp_path / "core.txt"
    path.write_text(write_text_array(PermutationArray(TWO_SYMBOL_CORE), 3))
    for mode in ("exact", "shallow", "condition-ii"):
        assert run(capsys, "verify", path, "--mode", mode)[0] == 0
    assert run(capsys, "verify", path, "--mode", "necessary")[0] == 2
    assert run(capsys, "verify", path, "--mode", "sample", "--trials", 100)[0] == 2


def test_verify_corrupted_witness(tmp_path, capsys):
    out = tmp_path / "w.json"
    run(capsys, "construct", "--route", "packing", "--t", 7, "--v", 6, "--l", 5, "--seed", 1, "-o", out)
    d = json.loads(out.read_text())
    # overwrite a row led by heavy symbol 6 with one led by light symbol 1
    victim = next(i for i, row in enumerate(d["rows"]) if row[0] == 6)
    d["rows"][victim] = next(row for row in d["rows"] if row[0] == 1)
    out.write_text(json.dumps(d))
    code, stdout, _ = run(capsys, "verify", out, "--json")
    assert code == 3 and "violation: sigma=" in stdout
    verdict = Verdict.from_json(json.loads(stdout.strip().splitlines()[-1]))
    assert verdict.witness.holds(PermutationArray(d["rows"], n_symbols=6), 7)


def test_verify_reproduces_embedded_certificate(tmp_path, capsys):
    out = tmp_path / "w.json"
    run(capsys, "construct", "--route", "ramsey", "--s", 6, "--delta", 1, "--alpha", 3, "--k", "3,3,3", "-o", out)
    d = json.loads(out.read_text())
    code, stdout, _ = run(capsys, "verify", out, "--mode", d["certificate"]["tier"], "--json")
    again = json.loads(stdout.strip().splitlines()[-1])
    assert code == 0 and again["status"] == d["certificate"]["status"] and again["witness"] is None
    # the same construct call writes the same rows and provenance
    out2 = tmp_path / "w2.json"
    run(capsys, "construct", "--route", "ramsey", "--s", 6, "--delta", 1, "--alpha", 3, "--k", "3,3,3", "-o", out2)
    d2 = json.loads(out2.read_text())
    assert d2["rows"] == d["rows"] and d2["provenance"] == d["provenance"]


def test_verify_sample_zero_trials(tmp_path, capsys):
    path = tmp_path / "core.txt"
    path.write_text(write_text_array(PermutationArray(TWO_SYMBOL_CORE), 3))
    assert run(capsys, "verify", path, "--mode", "sample", "--trials", 0)[0] == 1


def test_verify_parse_errors(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("2 2 3\n1 2\n1 1\n")
    assert run(capsys, "verify", bad)[0] == 1
    assert run(capsys, "verify", tmp_path / "missing.json")[0] == 1


def test_verify_cap_override(tmp_path, capsys, monkeypatch):
    path = tmp_path / "core.txt"
    path.write_text(write_text_array(PermutationArray([[1, 2, 3, 4, 5]]), 5))
    monkeypatch.setenv("SUITABLE_VERIFY_CAP", "4")
    assert run(capsys, "verify", path)[0] == 1
    monkeypatch.setenv("SUITABLE_VERIFY_CAP", "5")
    assert run(capsys, "verify", path)[0] == 3  # symbol 2 never leads


def test_verify_t_override(tmp_path, capsys):
    path = tmp_path / "core.txt"
    path.write_text(write_text_array(PermutationArray(TWO_SYMBOL_CORE), 3))
    assert run(capsys, "verify", path, "--t", 4)[0] == 3


@pytest.mark.parametrize("argv,code,value", [
    (["johnson-d43", "--l", "7"], 0, 7),
    (["corollary1", "--m", "1", "--k", "3,3"], 0, 6),
    (["lemma10-recurrence", "--m", "2", "--k", "3,3,3"], 0, 5),
    (["erdos", "--k", "10"], 0, 83),
    (["robertson", "--k", "3", "--l", "5", "--r-prev", "6"], 0, 21),
    (["lemma9", "--m", "2", "--r", "4", "--k", "10"], 0, 68),
    (["lemma9", "--m", "2", "--r", "4", "--k", "3"], 2, None),
])
def test_bounds(capsys, argv, code, value):
    got, stdout, _ = run(capsys, "bounds", *argv)
    assert got == code
    assert json.loads(stdout.strip().splitlines()[-1])["value"] == value


def test_bounds_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bounds", "nope"])
    assert exc.value.code == 1
    assert run(capsys, "bounds", "lemma9", "--m", "2")[0] == 1


def test_packing_and_coloring(tmp_path, capsys):
    out = tmp_path / "p.json"
    assert run(capsys, "packing", "--l", 7, "--k", 4, "--target", 7, "-o", out)[0] == 0
    assert len(json.loads(out.read_text())["blocks"]) == 7
    assert run(capsys, "packing", "--l", 8, "--k", 4, "--target", 14, "--restarts", 1)[0] == 2
    code, stdout, _ = run(capsys, "coloring", "--n", 5, "--k", "3,3")
    assert code == 0 and json.loads(stdout)["n"] == 5
    code, stdout, _ = run(capsys, "coloring", "--n", 6, "--k", "3,3", "--exhaustive")
    assert code == 0 and json.loads(stdout)["nonexistent"] is True
    assert run(capsys, "coloring", "--n", 6, "--k", "3,3", "--budget", 500)[0] == 2


def test_plan(capsys):
    code, stdout, _ = run(capsys, "plan", "--t", 8, "--v", 7)
    assert code == 0 and json.loads(stdout)["packing"]["l_values"] == [7]
    assert run(capsys, "plan", "--t", 7, "--v", 9)[0] == 4
