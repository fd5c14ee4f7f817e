import csv
import io
import json
import subprocess
import sys

import pytest

import gcdlab.cli as cli
from gcdlab.reports import to_canonical_json
from gcdlab.search import Violation


def run_cli(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture()
def remark2_file(tmp_path, capsys):
    path = tmp_path / "r2.json"
    code, _, _ = run_cli(
        ["family", "remark2", "--X", "100", "--Y", "50", "--D", "10",
         "--emit-set", str(path)],
        capsys,
    )
    assert code == 0
    return str(path)


def test_stats_remark2(remark2_file, capsys):
    code, out, err = run_cli(["stats", remark2_file], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "stats"
    assert doc["summary"]["delta"] == "1"
    assert doc["summary"]["holds"] is True
    assert doc["summary"]["n_a"] == 11 and doc["summary"]["n_b"] == 6


def test_stats_empty_pair_set(tmp_path, capsys):
    path = tmp_path / "empty.json"
    path.write_text(
        json.dumps({"A": ["5", "7"], "B": ["9", "11"], "D": "4",
                    "X": "5", "Y": "9", "epsilon": 0.5, "p0": 100})
    )
    code, out, _ = run_cli(["stats", str(path)], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"]["delta"] == "0"
    assert doc["summary"]["holds"] is None
    assert "skipped" in doc["summary"]["notice"]


def test_exit_2_on_bad_range(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(
        json.dumps({"A": ["5", "30"], "B": ["7"], "D": "2",
                    "X": "5", "Y": "7", "epsilon": 0.5, "p0": 100})
    )
    code, out, err = run_cli(["stats", str(path)], capsys)
    assert code == 2
    assert "A[1]" in err and not out


def test_exit_2_on_macro_garbage(tmp_path, capsys):
    path = tmp_path / "garbage.json"
    path.write_text("definitely not json")
    code, _, err = run_cli(["stats", str(path)], capsys)
    assert code == 2
    assert "JSON" in err


def test_exit_1_on_violation(monkeypatch, capsys):
    fake = [Violation("diagonal-gap-bound", {"X": 4, "D": 2, "set": [1], "allowed": 0})]
    monkeypatch.setattr(cli, "hunt_violations", lambda *a, **k: fake)
    code, out, _ = run_cli(["search", "hunt", "--scale-limit", "2", "--structured", "1"], capsys)
    assert code == 1
    doc = json.loads(out)
    assert doc["summary"]["violations_found"] == 1
    assert doc["records"][0]["kind"] == "diagonal-gap-bound"


def test_structure_report(remark2_file, capsys):
    code, out, _ = run_cli(["structure", remark2_file], capsys)
    assert code == 0
    doc = json.loads(out)
    s = doc["summary"]
    assert s["holds"] is True
    assert s["witness"]["chain_ok"] is True
    assert s["N_factors"]
    assert any(r["side"] == "A" for r in doc["records"])
    # this instance lands below the 1/2 pivotal fraction: warn, still exit 0
    assert "warning" in s


def test_emit_set_non_dyadic_documented(tmp_path, capsys):
    path = tmp_path / "sec5.json"
    code, _, _ = run_cli(["family", "sec5", "--X", "4", "--emit-set", str(path)], capsys)
    assert code == 0
    doc = json.loads(path.read_text())
    assert "X" not in doc and doc["A"]
    # loading reports the genuine range failure
    code, _, err = run_cli(["stats", str(path)], capsys)
    assert code == 2 and "dyadic" in err


def test_defect_subcommand(capsys):
    code, out, _ = run_cli(["defect", "--a", "12", "--n", "6", "--b", "18"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"]["a_star"] == "2"
    assert doc["summary"]["pivotal"] is True
    assert doc["summary"]["quad_identity"] is True
    assert all(r["ok"] for r in doc["records"])


def test_defect_subcommand_rejects_invalid(capsys):
    code, _, err = run_cli(["defect", "--a", "24", "--n", "6"], capsys)
    assert code == 2
    assert "outside" in err


def test_measure_point_mass(capsys):
    code, out, _ = run_cli(["measure", "--point-mass", "0", "0", "--lambda", "0.5"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"]["tail"] == 0.0
    assert doc["summary"]["c_min"] == 1.0


def test_measure_from_instance(remark2_file, capsys):
    code, out, _ = run_cli(["measure", "--instance", remark2_file, "--prime", "5"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"]["c_lower_ok"] is True
    assert doc["summary"]["c_interval"] is not None
    assert doc["records"]


def test_family_remark3_and_squarefree(capsys):
    code, out, _ = run_cli(["family", "remark3", "--X", "60", "--D", "4", "--delta", "1/2"], capsys)
    assert code == 0
    assert json.loads(out)["summary"]["parameters"]["D0"] == 2

    code, out, _ = run_cli(["family", "squarefree", "--n", "6", "--Q", "6"], capsys)
    assert code == 0
    assert json.loads(out)["summary"]["n_a"] == 5

    code, out, _ = run_cli(["family", "sec5", "--X", "4"], capsys)
    assert code == 0
    assert json.loads(out)["summary"]["n_a"] == 5


def test_search_exhaustive(capsys):
    code, out, _ = run_cli(["search", "exhaustive", "--X", "4", "--D", "2"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"]["max_product"] == 9
    assert doc["summary"]["best_a"] == ["4", "6", "8"]


def test_search_hunt_clean(capsys):
    code, out, _ = run_cli(
        ["search", "hunt", "--scale-limit", "6", "--structured", "25", "--seed", "3"],
        capsys,
    )
    assert code == 0
    assert json.loads(out)["summary"]["violations_found"] == 0


def test_json_roundtrip_byte_identical(remark2_file, capsys):
    _, out, _ = run_cli(["stats", remark2_file], capsys)
    assert to_canonical_json(json.loads(out)) == out


def test_csv_roundtrip_byte_identical(remark2_file, capsys):
    _, out, _ = run_cli(["stats", remark2_file, "--format", "csv"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    assert buf.getvalue() == out


def test_same_seed_byte_identical(capsys):
    argv = ["search", "hunt", "--scale-limit", "5", "--structured", "20", "--seed", "9"]
    _, first, _ = run_cli(argv, capsys)
    _, second, _ = run_cli(argv, capsys)
    assert first == second

    argv = ["measure", "--random", "40", "--seed", "13"]
    _, first, _ = run_cli(argv, capsys)
    _, second, _ = run_cli(argv, capsys)
    assert first == second


def test_epsilon_domain_rejected(capsys):
    code, _, err = run_cli(
        ["measure", "--point-mass", "0", "0", "--lambda", "0.5", "--epsilon", "1.0"],
        capsys,
    )
    assert code == 2
    assert "epsilon" in err


def test_bad_arguments_exit_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["search", "exhaustive", "--X", "nope", "--D", "2"])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gcdlab", "defect", "--a", "12", "--n", "6"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["summary"]["a_star"] == "2"
